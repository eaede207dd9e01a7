#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "wsim/deeponet.hpp"

using namespace wsim;

namespace {

Normalization unit_norm(const Ablation& ablation) {
    Normalization n;
    const int nb = ablation.shape_info == ShapeInfo::Branch ? 9 : 5;
    const int nt = ablation.shape_info == ShapeInfo::Trunk ? 7 : 3;
    n.branch_lo = Eigen::VectorXd::Zero(nb);
    n.branch_hi = Eigen::VectorXd::Ones(nb);
    n.trunk_lo = Eigen::VectorXd::Zero(nt);
    n.trunk_hi = Eigen::VectorXd::Ones(nt);
    return n;
}

DataRecord random_record(Rng& rng, double xl = 2.0, double yl = 1.5) {
    DataRecord r;
    for (double& v : r.branch) v = rng.uniform(0.1, 0.9);
    r.trunk = {rng.uniform(0.0, 1.0), rng.uniform(0.0, xl), rng.uniform(0.0, yl),
               rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8),
               rng.uniform(0.2, 0.8)};
    r.target = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    r.extent = {xl, yl};
    return r;
}

// Flat views over all parameters, for the finite-difference oracle.
std::vector<double*> parameter_pointers(DeepONetModel& m) {
    std::vector<double*> out;
    for (auto* mlp : {&m.branch, &m.trunk})
        for (auto& layer : mlp->layers) {
            for (int c = 0; c < layer.W.cols(); ++c)
                for (int r = 0; r < layer.W.rows(); ++r) out.push_back(&layer.W(r, c));
            for (int r = 0; r < layer.b.size(); ++r) out.push_back(&layer.b(r));
        }
    return out;
}

std::vector<double> gradient_values(const DeepONetModel& m, const ModelGradients& g) {
    std::vector<double> out;
    auto push = [&](const std::vector<MLP::Layer>& layers) {
        for (const auto& layer : layers) {
            for (int c = 0; c < layer.W.cols(); ++c)
                for (int r = 0; r < layer.W.rows(); ++r) out.push_back(layer.W(r, c));
            for (int r = 0; r < layer.b.size(); ++r) out.push_back(layer.b(r));
        }
    };
    push(g.branch);
    push(g.trunk);
    (void)m;
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("deeponet");

TEST_CASE("mlp forward basics") {
    Rng rng(7);
    MLP zero = MLP::create({2, 3, 2}, rng);
    for (auto& layer : zero.layers) {
        layer.W.setZero();
        layer.b.setZero();
    }
    CHECK(mlp_forward(zero, Eigen::Vector2d(1.0, -2.0)).norm() == 0.0);

    // Single hidden layer with identity weights: ReLU clamps the negatives.
    MLP relu = MLP::create({2, 2, 2}, rng);
    relu.layers[0].W = Eigen::Matrix2d::Identity();
    relu.layers[0].b.setZero();
    relu.layers[1].W = Eigen::Matrix2d::Identity();
    relu.layers[1].b.setZero();
    const Eigen::VectorXd out = mlp_forward(relu, Eigen::Vector2d(-1.0, 2.0));
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 2.0);

    CHECK_THROWS_AS(mlp_forward(relu, Eigen::Vector3d(1, 2, 3)), std::invalid_argument);
}

TEST_CASE("mlp forward matches an independent matrix-arithmetic oracle") {
    Rng rng(11);
    const MLP mlp = MLP::create({3, 4, 4, 2}, rng);
    for (int it = 0; it < 3; ++it) {
        Eigen::VectorXd x(3);
        x << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
        // Hand-rolled loops, no Eigen products.
        std::vector<double> a(x.data(), x.data() + 3);
        for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
            const auto& L = mlp.layers[l];
            std::vector<double> z(L.W.rows(), 0.0);
            for (int r = 0; r < L.W.rows(); ++r) {
                double s = L.b[r];
                for (int c = 0; c < L.W.cols(); ++c) s += L.W(r, c) * a[c];
                z[r] = (l + 1 < mlp.layers.size() && s < 0.0) ? 0.0 : s;
            }
            a = z;
        }
        const Eigen::VectorXd y = mlp_forward(mlp, x);
        for (int k = 0; k < 2; ++k) CHECK(y[k] == doctest::Approx(a[k]).epsilon(1e-12));
    }
}

TEST_CASE("deeponet forward structure") {
    Rng rng(13);
    const Ablation ab{ShapeInfo::None, false};

    SUBCASE("zero trunk output gives zero displacement") {
        DeepONetModel m = DeepONetModel::create(4, ab, unit_norm(ab), rng, {8});
        for (auto& layer : m.trunk.layers) {
            layer.W.setZero();
            layer.b.setZero();
        }
        const auto out = deeponet_forward(m, random_record(rng));
        CHECK(out[0] == 0.0);
        CHECK(out[1] == 0.0);
    }

    SUBCASE("p = 1 dot-product arithmetic") {
        DeepONetModel m = DeepONetModel::create(1, ab, unit_norm(ab), rng, {2});
        // Force branch output (2, 3) and trunk output (4) for every input.
        m.branch.layers.back().W.setZero();
        m.branch.layers.back().b << 2.0, 3.0;
        m.trunk.layers.back().W.setZero();
        m.trunk.layers.back().b << 4.0;
        const auto out = deeponet_forward(m, random_record(rng));
        CHECK(out[0] == doctest::Approx(8.0));
        CHECK(out[1] == doctest::Approx(12.0));
    }

    SUBCASE("forward equals an explicit basis-sum loop") {
        const Ablation final_ab{ShapeInfo::Trunk, true};
        DeepONetModel m = DeepONetModel::create(6, final_ab, unit_norm(final_ab), rng,
                                                {10, 10});
        for (int it = 0; it < 20; ++it) {
            const DataRecord r = random_record(rng);
            const Eigen::VectorXd b = mlp_forward(
                m.branch, ((m.branch_raw(r) - m.norm.branch_lo).array()
                           / (m.norm.branch_hi - m.norm.branch_lo).array()).matrix());
            const Eigen::VectorXd c = mlp_forward(
                m.trunk, ((m.trunk_raw(r) - m.norm.trunk_lo).array()
                          / (m.norm.trunk_hi - m.norm.trunk_lo).array()).matrix());
            double u1 = 0.0, u2 = 0.0;
            for (int i = 0; i < m.p; ++i) {
                u1 += b[i] * c[i];
                u2 += b[m.p + i] * c[i];
            }
            const auto aug = sine_augment(u1, u2, r.trunk[1], r.trunk[2], r.extent[0],
                                          r.extent[1]);
            const auto out = deeponet_forward(m, r);
            CHECK(out[0] == doctest::Approx(aug[0]).epsilon(1e-12));
            CHECK(out[1] == doctest::Approx(aug[1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("sine augmentation boundary pattern") {
    CHECK(sine_augment(1.0, 1.0, 0.0, 0.7, 2.0, 1.5)[0] == 0.0);       // x = 0
    const auto top = sine_augment(1.0, 1.0, 0.8, 1.5, 2.0, 1.5);      // y = y_l
    CHECK(std::abs(top[0]) < 1e-15);
    CHECK(std::abs(top[1]) < 1e-15);
    const auto mid = sine_augment(1.0, 0.0, 1.0, 0.0, 2.0, 1.5);      // x = x_l/2, y = 0
    CHECK(mid[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(sine_augment(1, 1, 0, 0, 0.0, 1.0), std::domain_error);

    // Arbitrary parameters: the zero pattern holds on every boundary.
    Rng rng(17);
    const Ablation ab{ShapeInfo::Trunk, true};
    for (int draw = 0; draw < 100; ++draw) {
        DeepONetModel m = DeepONetModel::create(3, ab, unit_norm(ab), rng, {6});
        DataRecord r = random_record(rng);
        auto at = [&](double x, double y) {
            r.trunk[1] = x;
            r.trunk[2] = y;
            return deeponet_forward(m, r);
        };
        const double xl = r.extent[0], yl = r.extent[1];
        CHECK(std::abs(at(xl, 0.3 * yl)[0]) <= 1e-14);  // right: both vanish
        CHECK(std::abs(at(xl, 0.3 * yl)[1]) <= 1e-14);
        CHECK(std::abs(at(0.4 * xl, yl)[0]) <= 1e-14);  // top: both vanish
        CHECK(std::abs(at(0.4 * xl, yl)[1]) <= 1e-14);
        CHECK(std::abs(at(0.0, 0.6 * yl)[0]) <= 1e-14);  // left: u1 vanishes
        CHECK(std::abs(at(0.7 * xl, 0.0)[1]) <= 1e-14);  // bottom: u2 vanishes
    }
}

TEST_CASE("gradients match central finite differences") {
    Rng rng(23);
    const Ablation ab{ShapeInfo::Trunk, true};
    double worst = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
        DeepONetModel m = DeepONetModel::create(2, ab, unit_norm(ab), rng, {4});
        // Probe at O(1) parameter scale so finite-difference roundoff stays
        // far below the tolerance (create() damps the output layers).
        m.branch.layers.back().W *= 10.0;
        m.trunk.layers.back().W *= 10.0;
        std::vector<DataRecord> batch;
        for (int i = 0; i < 3; ++i) batch.push_back(random_record(rng));

        ModelGradients grads;
        loss_and_gradients(m, batch, grads);
        const std::vector<double> analytic = gradient_values(m, grads);
        const std::vector<double*> params = parameter_pointers(m);
        REQUIRE(analytic.size() == params.size());

        // Probe a deterministic subset of the parameters each draw.
        for (std::size_t k = draw % 7; k < params.size(); k += 7) {
            const double h = 1e-6;
            const double saved = *params[k];
            ModelGradients scratch;
            *params[k] = saved + h;
            const double lp = loss_and_gradients(m, batch, scratch);
            *params[k] = saved - h;
            const double lm = loss_and_gradients(m, batch, scratch);
            *params[k] = saved;
            const double fd = (lp - lm) / (2.0 * h);
            const double denom = std::max({std::abs(fd), std::abs(analytic[k]), 1e-8});
            worst = std::max(worst, std::abs(fd - analytic[k]) / denom);
        }
    }
    INFO("worst relative gradient error " << worst);
    CHECK(worst <= 1e-5);
}

TEST_CASE("loss semantics") {
    Rng rng(29);
    const Ablation ab{ShapeInfo::None, false};
    DeepONetModel m = DeepONetModel::create(3, ab, unit_norm(ab), rng, {5});

    SUBCASE("perfect predictions give zero loss and zero gradients") {
        std::vector<DataRecord> batch;
        for (int i = 0; i < 4; ++i) {
            DataRecord r = random_record(rng);
            const auto out = deeponet_forward(m, r);
            r.target = out;
            batch.push_back(r);
        }
        ModelGradients grads;
        const double loss = loss_and_gradients(m, batch, grads);
        CHECK(loss == 0.0);
        for (const auto& g : gradient_values(m, grads)) CHECK(g == 0.0);
    }

    SUBCASE("duplicating the batch leaves loss and gradients unchanged") {
        std::vector<DataRecord> batch;
        for (int i = 0; i < 5; ++i) batch.push_back(random_record(rng));
        std::vector<DataRecord> doubled = batch;
        doubled.insert(doubled.end(), batch.begin(), batch.end());

        ModelGradients g1, g2;
        const double l1 = loss_and_gradients(m, batch, g1);
        const double l2 = loss_and_gradients(m, doubled, g2);
        CHECK(l1 == doctest::Approx(l2).epsilon(1e-14));
        const auto v1 = gradient_values(m, g1);
        const auto v2 = gradient_values(m, g2);
        for (std::size_t k = 0; k < v1.size(); ++k)
            CHECK(v1[k] == doctest::Approx(v2[k]).epsilon(1e-12));
    }

    SUBCASE("empty batch is rejected") {
        ModelGradients grads;
        CHECK_THROWS_AS(loss_and_gradients(m, {}, grads), std::invalid_argument);
    }
}

TEST_CASE("adam") {
    Rng rng(31);
    const Ablation ab{ShapeInfo::None, false};
    TrainConfig cfg;

    SUBCASE("zero gradients leave parameters unchanged") {
        DeepONetModel m = DeepONetModel::create(2, ab, unit_norm(ab), rng, {4});
        const DeepONetModel before = m;
        AdamState st = AdamState::zeros_like(m);
        ModelGradients grads;
        grads.branch = AdamState::zeros_like(m).m_branch;
        grads.trunk = AdamState::zeros_like(m).m_trunk;
        adam_step(m, grads, st, cfg);
        CHECK(st.step_count == 1);
        for (std::size_t l = 0; l < m.branch.layers.size(); ++l)
            CHECK((m.branch.layers[l].W - before.branch.layers[l].W).norm() == 0.0);
    }

    SUBCASE("one step reproduces the scalar Adam recurrence") {
        // theta = 0, g = 1, lr = 1e-3: first step moves by lr * 1/(1 + eps-ish).
        DeepONetModel m = DeepONetModel::create(1, ab, unit_norm(ab), rng, {1});
        for (auto* mlp : {&m.branch, &m.trunk})
            for (auto& layer : mlp->layers) {
                layer.W.setZero();
                layer.b.setZero();
            }
        ModelGradients grads;
        grads.branch.resize(m.branch.layers.size());
        grads.trunk.resize(m.trunk.layers.size());
        for (std::size_t l = 0; l < m.branch.layers.size(); ++l) {
            grads.branch[l].W = Eigen::MatrixXd::Ones(m.branch.layers[l].W.rows(),
                                                      m.branch.layers[l].W.cols());
            grads.branch[l].b = Eigen::VectorXd::Ones(m.branch.layers[l].b.size());
        }
        for (std::size_t l = 0; l < m.trunk.layers.size(); ++l) {
            grads.trunk[l].W = Eigen::MatrixXd::Zero(m.trunk.layers[l].W.rows(),
                                                     m.trunk.layers[l].W.cols());
            grads.trunk[l].b = Eigen::VectorXd::Zero(m.trunk.layers[l].b.size());
        }
        AdamState st = AdamState::zeros_like(m);
        adam_step(m, grads, st, cfg);
        // m_hat = 1, v_hat = 1 -> step = lr / (1 + eps_hat).
        const double expected = -cfg.learning_rate / (1.0 + cfg.eps_hat);
        CHECK(m.branch.layers[0].W(0, 0) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::abs(m.branch.layers[0].W(0, 0) + 1e-3) < 1e-10);
    }
}

TEST_CASE("training") {
    Rng data_rng(37);
    const Ablation ab{ShapeInfo::Trunk, true};

    std::vector<DataRecord> records;
    for (int i = 0; i < 120; ++i) records.push_back(random_record(data_rng));

    SUBCASE("fixed seed reproduces the loss history bitwise") {
        TrainConfig cfg;
        cfg.epochs = 3;
        cfg.batch_size = 16;
        cfg.seed = 99;
        auto run = [&] {
            Rng init(555);
            DeepONetModel m = DeepONetModel::create(4, ab, unit_norm(ab), init, {8, 8});
            return train(m, std::span(records).subspan(0, 96),
                         std::span(records).subspan(96), cfg);
        };
        const TrainHistory h1 = run();
        const TrainHistory h2 = run();
        REQUIRE(h1.train_mse.size() == h2.train_mse.size());
        for (std::size_t e = 0; e < h1.train_mse.size(); ++e) {
            CHECK(h1.train_mse[e] == h2.train_mse[e]);
            CHECK(h1.val_mse[e] == h2.val_mse[e]);
        }
    }

    SUBCASE("realizable targets from a frozen teacher keep val MSE tiny") {
        Rng init(202);
        DeepONetModel teacher = DeepONetModel::create(2, ab, unit_norm(ab), init, {6});
        std::vector<DataRecord> labeled = records;
        for (auto& r : labeled) r.target = deeponet_forward(teacher, r);

        // A student starting at the optimum must stay there.
        DeepONetModel student = warm_start(teacher);
        TrainConfig cfg;
        cfg.epochs = 5;
        cfg.batch_size = 20;
        const TrainHistory h = train(student, std::span(labeled).subspan(0, 96),
                                     std::span(labeled).subspan(96), cfg);
        CHECK(h.val_mse.front() == 0.0);
        CHECK(h.val_mse.back() < 1e-6);
    }

    SUBCASE("training reduces the loss on learnable data") {
        // Smooth target function of the trunk inputs.
        std::vector<DataRecord> labeled = records;
        for (auto& r : labeled) {
            const double s = std::sin(r.trunk[0]) * r.trunk[1] / 4.0;
            r.target = {s, 0.5 * s};
        }
        Rng init(777);
        DeepONetModel m = DeepONetModel::create(4, {ShapeInfo::None, false},
                                                unit_norm({ShapeInfo::None, false}), init,
                                                {16, 16});
        TrainConfig cfg;
        cfg.epochs = 60;
        cfg.batch_size = 16;
        cfg.learning_rate = 3e-3;
        const TrainHistory h = train(m, std::span(labeled).subspan(0, 96),
                                     std::span(labeled).subspan(96), cfg);
        CHECK(h.val_mse.back() < 0.3 * h.val_mse.front());
    }
}

TEST_CASE("warm start") {
    Rng rng(41);
    const Ablation ab{ShapeInfo::Trunk, true};
    DeepONetModel m = DeepONetModel::create(3, ab, unit_norm(ab), rng, {6});
    const DeepONetModel copy = warm_start(m);

    DataRecord r = random_record(rng);
    const auto a = deeponet_forward(m, r);
    const auto b = deeponet_forward(copy, r);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);

    // Fresh optimizer state is all zeros.
    const AdamState st = AdamState::zeros_like(copy);
    CHECK(st.step_count == 0);
    for (const auto& layer : st.m_branch) CHECK(layer.W.norm() == 0.0);

    // Architecture mismatch is rejected.
    DeepONetModel other = DeepONetModel::create(4, ab, unit_norm(ab), rng, {6});
    CHECK_THROWS_AS(copy_parameters_into(other, m), std::invalid_argument);
}

TEST_CASE("ablation wiring") {
    Rng rng(43);
    for (int case_id = 1; case_id <= 5; ++case_id) {
        const Ablation ab = ablation_case(case_id);
        DeepONetModel m = DeepONetModel::create(2, ab, unit_norm(ab), rng, {4});
        if (ab.shape_info == ShapeInfo::Trunk)
            CHECK(m.trunk.input_dim() == 7);
        else
            CHECK(m.trunk.input_dim() == 3);
        if (ab.shape_info == ShapeInfo::Branch)
            CHECK(m.branch.input_dim() == 9);
        else
            CHECK(m.branch.input_dim() == 5);
        CHECK(m.branch.output_dim() == 2 * m.p);
        CHECK(m.trunk.output_dim() == m.p);
    }
    CHECK_THROWS_AS(ablation_case(6), std::invalid_argument);
}

TEST_CASE("persistence round trip is exact") {
    Rng rng(47);
    const Ablation ab{ShapeInfo::Trunk, true};
    DeepONetModel m = DeepONetModel::create(5, ab, unit_norm(ab), rng, {12, 12});

    const std::string path = "deeponet_roundtrip_test.model";
    save_model(m, path);
    const DeepONetModel loaded = load_model(path);

    Rng probe(48);
    for (int it = 0; it < 1000; ++it) {
        const DataRecord r = random_record(probe);
        const auto a = deeponet_forward(m, r);
        const auto b = deeponet_forward(loaded, r);
        CHECK(a[0] == b[0]);
        CHECK(a[1] == b[1]);
    }
    std::remove(path.c_str());
}

TEST_CASE("predict field") {
    Rng rng(53);
    const Ablation ab{ShapeInfo::Trunk, true};
    const WoundGeometry geom{WoundKind::Rectangle, 1.0, 0.8};
    const VariableParams vp;
    const Vec2 ext = domain_extent(geom);

    // Physical normalization: Table-1 bounds for the branch, domain bounds
    // for the trunk (the model contract requires normalized inputs).
    std::vector<DataRecord> probe_records;
    {
        Rng g(999);
        const auto quad = shape_quadruple(geom);
        for (int k = 0; k < 32; ++k) {
            DataRecord r;
            r.branch = vp.as_array();
            r.trunk = {g.uniform(0, 10), g.uniform(0, ext.x()), g.uniform(0, ext.y()),
                       quad[0], quad[1], quad[2], quad[3]};
            r.extent = {ext.x(), ext.y()};
            probe_records.push_back(r);
        }
    }
    DeepONetModel m = DeepONetModel::create(
        3, ab, make_normalization(probe_records, ab), rng, {6});

    SUBCASE("boundary grid satisfies the zero pattern exactly") {
        std::vector<std::array<double, 3>> grid;
        for (int k = 0; k <= 10; ++k) {
            grid.push_back({5.0, ext.x(), ext.y() * k / 10.0});  // right edge
            grid.push_back({5.0, ext.x() * k / 10.0, ext.y()});  // top edge
        }
        const auto pred = predict_field(m, vp, geom, grid);
        for (const auto& u : pred.u) {
            CHECK(std::abs(u[0]) <= 1e-14);
            CHECK(std::abs(u[1]) <= 1e-14);
        }
    }

    SUBCASE("permuting the grid permutes the outputs") {
        std::vector<std::array<double, 3>> grid;
        Rng g(54);
        for (int k = 0; k < 137; ++k)
            grid.push_back({g.uniform(0, 10), g.uniform(0, ext.x()), g.uniform(0, ext.y())});
        const auto pred = predict_field(m, vp, geom, grid);
        std::vector<std::array<double, 3>> reversed(grid.rbegin(), grid.rend());
        const auto pred_rev = predict_field(m, vp, geom, reversed);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(pred.u[i][0] == pred_rev.u[grid.size() - 1 - i][0]);
            CHECK(pred.u[i][1] == pred_rev.u[grid.size() - 1 - i][1]);
        }
    }

    SUBCASE("points outside the domain are rejected") {
        std::vector<std::array<double, 3>> grid = {{0.0, ext.x() + 0.5, 0.1}};
        CHECK_THROWS_AS(predict_field(m, vp, geom, grid), std::domain_error);
    }
}

TEST_SUITE_END();
