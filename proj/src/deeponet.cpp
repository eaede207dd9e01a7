#include "wsim/deeponet.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wsim {

std::string to_string(ShapeInfo s) {
    switch (s) {
        case ShapeInfo::None: return "none";
        case ShapeInfo::Branch: return "branch";
        case ShapeInfo::Trunk: return "trunk";
    }
    return "none";
}

ShapeInfo shape_info_from_string(const std::string& s) {
    if (s == "none") return ShapeInfo::None;
    if (s == "branch") return ShapeInfo::Branch;
    if (s == "trunk") return ShapeInfo::Trunk;
    throw std::invalid_argument("unknown shape_info: " + s);
}

Ablation ablation_case(int case_id) {
    switch (case_id) {
        case 1: return {ShapeInfo::None, false};
        case 2: return {ShapeInfo::Branch, false};
        case 3: return {ShapeInfo::Trunk, false};
        case 4: return {ShapeInfo::None, true};
        case 5: return {ShapeInfo::Trunk, true};
    }
    throw std::invalid_argument("ablation case must be 1..5");
}

std::string ablation_case_name(int case_id) {
    switch (case_id) {
        case 1: return "case1_plain";
        case 2: return "case2_shape_to_branch";
        case 3: return "case3_shape_to_trunk";
        case 4: return "case4_sine_aug";
        case 5: return "final_model";
    }
    throw std::invalid_argument("ablation case must be 1..5");
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || batch_size < 1 || epochs < 0 || !(beta1 > 0.0 && beta1 < 1.0)
        || !(beta2 > 0.0 && beta2 < 1.0) || !(eps_hat > 0.0))
        throw std::invalid_argument("TrainConfig: invalid hyperparameters");
}

MLP MLP::create(const std::vector<int>& dims, Rng& rng) {
    if (dims.size() < 2) throw std::invalid_argument("MLP: need at least two dims");
    MLP mlp;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Layer layer;
        layer.W.resize(dims[l + 1], dims[l]);
        layer.b = Eigen::VectorXd::Zero(dims[l + 1]);
        const double limit = std::sqrt(6.0 / dims[l]);
        for (int r = 0; r < layer.W.rows(); ++r)
            for (int c = 0; c < layer.W.cols(); ++c)
                layer.W(r, c) = rng.uniform(-limit, limit);
        mlp.layers.push_back(std::move(layer));
    }
    return mlp;
}

Eigen::MatrixXd mlp_forward_batch(const MLP& mlp, const Eigen::MatrixXd& X) {
    if (X.rows() != mlp.input_dim())
        throw std::invalid_argument("mlp_forward: input width mismatch");
    Eigen::MatrixXd a = X;
    for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
        a = (mlp.layers[l].W * a).colwise() + mlp.layers[l].b;
        if (l + 1 < mlp.layers.size()) a = a.cwiseMax(0.0);
    }
    return a;
}

Eigen::VectorXd mlp_forward(const MLP& mlp, const Eigen::VectorXd& x) {
    return mlp_forward_batch(mlp, x);
}

DeepONetModel DeepONetModel::create(int p, Ablation ablation, const Normalization& norm,
                                    Rng& rng, const std::vector<int>& hidden) {
    if (p < 1) throw std::invalid_argument("DeepONetModel: p must be at least 1");
    DeepONetModel m;
    m.p = p;
    m.ablation = ablation;
    m.norm = norm;

    std::vector<int> branch_dims{m.branch_input_dim()};
    branch_dims.insert(branch_dims.end(), hidden.begin(), hidden.end());
    branch_dims.push_back(2 * p);
    std::vector<int> trunk_dims{m.trunk_input_dim()};
    trunk_dims.insert(trunk_dims.end(), hidden.begin(), hidden.end());
    trunk_dims.push_back(p);

    m.branch = MLP::create(branch_dims, rng);
    m.trunk = MLP::create(trunk_dims, rng);
    // Damp the output layers: the basis inner product multiplies the two
    // output scales, and a large random product costs most of the training
    // budget to unlearn.
    m.branch.layers.back().W *= 0.1;
    m.trunk.layers.back().W *= 0.1;

    if ((int)m.norm.branch_lo.size() != m.branch_input_dim()
        || (int)m.norm.trunk_lo.size() != m.trunk_input_dim())
        throw std::invalid_argument("DeepONetModel: normalization width mismatch");
    return m;
}

Eigen::VectorXd DeepONetModel::branch_raw(const DataRecord& r) const {
    Eigen::VectorXd x(branch_input_dim());
    for (int i = 0; i < 5; ++i) x[i] = r.branch[i];
    if (ablation.shape_info == ShapeInfo::Branch)
        for (int i = 0; i < 4; ++i) x[5 + i] = r.trunk[3 + i];  // the quadruple
    return x;
}

Eigen::VectorXd DeepONetModel::trunk_raw(const DataRecord& r) const {
    Eigen::VectorXd x(trunk_input_dim());
    const int n = trunk_input_dim();
    for (int i = 0; i < n; ++i) x[i] = r.trunk[i];
    return x;
}

Normalization make_normalization(std::span<const DataRecord> records,
                                 const Ablation& ablation,
                                 const VariableParamRanges& ranges) {
    const int nb = ablation.shape_info == ShapeInfo::Branch ? 9 : 5;
    const int nt = ablation.shape_info == ShapeInfo::Trunk ? 7 : 3;
    Normalization norm;
    norm.branch_lo.resize(nb);
    norm.branch_hi.resize(nb);
    norm.trunk_lo.resize(nt);
    norm.trunk_hi.resize(nt);

    const std::array<std::array<double, 2>, 5> table = {ranges.D_F, ranges.chi_F,
                                                        ranges.D_c, ranges.k_F, ranges.a_c_I};
    for (int i = 0; i < 5; ++i) {
        norm.branch_lo[i] = table[i][0];
        norm.branch_hi[i] = table[i][1];
    }

    auto dataset_bounds = [&](int trunk_col, double& lo, double& hi) {
        lo = 1e300;
        hi = -1e300;
        for (const auto& r : records) {
            lo = std::min(lo, r.trunk[trunk_col]);
            hi = std::max(hi, r.trunk[trunk_col]);
        }
        if (records.empty()) { lo = 0.0; hi = 1.0; }
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) hi = lo + 1.0;
    };
    for (int i = 0; i < nt; ++i) dataset_bounds(i, norm.trunk_lo[i], norm.trunk_hi[i]);
    if (ablation.shape_info == ShapeInfo::Branch)
        for (int i = 0; i < 4; ++i)
            dataset_bounds(3 + i, norm.branch_lo[5 + i], norm.branch_hi[5 + i]);
    return norm;
}

std::array<double, 2> sine_augment(double u1_hat, double u2_hat, double x, double y,
                                   double x_l, double y_l) {
    if (!(x_l > 0.0) || !(y_l > 0.0))
        throw std::domain_error("sine_augment: extents must be positive");
    const double pi = std::numbers::pi;
    const double u1 = u1_hat * std::sin(pi * x / x_l) * std::cos(0.5 * pi * y / y_l);
    const double u2 = u2_hat * std::sin(pi * y / y_l) * std::cos(0.5 * pi * x / x_l);
    return {u1, u2};
}

namespace {

Eigen::MatrixXd normalize_batch(const Eigen::MatrixXd& X, const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi) {
    return (X.colwise() - lo).array().colwise() / (hi - lo).array();
}

struct ForwardCache {
    // a[0] is the (normalized) input; hidden entries are post-ReLU.
    std::vector<Eigen::MatrixXd> branch_a, trunk_a;
    Eigen::MatrixXd sine;  // 2 x n multiplicative factors (ones when off)
    Eigen::MatrixXd pred;  // 2 x n
};

void forward_cached(const DeepONetModel& model, std::span<const DataRecord> records,
                    ForwardCache& fc) {
    const int n = (int)records.size();
    Eigen::MatrixXd Xb(model.branch_input_dim(), n);
    Eigen::MatrixXd Xt(model.trunk_input_dim(), n);
    for (int j = 0; j < n; ++j) {
        Xb.col(j) = model.branch_raw(records[j]);
        Xt.col(j) = model.trunk_raw(records[j]);
    }

    auto run = [](const MLP& mlp, Eigen::MatrixXd input, std::vector<Eigen::MatrixXd>& acts) {
        acts.clear();
        acts.push_back(std::move(input));
        for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
            Eigen::MatrixXd z = (mlp.layers[l].W * acts.back()).colwise() + mlp.layers[l].b;
            if (l + 1 < mlp.layers.size()) z = z.cwiseMax(0.0);
            acts.push_back(std::move(z));
        }
    };
    run(model.branch, normalize_batch(Xb, model.norm.branch_lo, model.norm.branch_hi),
        fc.branch_a);
    run(model.trunk, normalize_batch(Xt, model.norm.trunk_lo, model.norm.trunk_hi),
        fc.trunk_a);

    const Eigen::MatrixXd& B = fc.branch_a.back();  // 2p x n
    const Eigen::MatrixXd& C = fc.trunk_a.back();   // p x n
    const int p = model.p;

    fc.sine = Eigen::MatrixXd::Ones(2, n);
    fc.pred.resize(2, n);
    for (int j = 0; j < n; ++j) {
        const double u1 = B.col(j).head(p).dot(C.col(j));
        const double u2 = B.col(j).tail(p).dot(C.col(j));
        if (model.ablation.sine_aug) {
            const DataRecord& r = records[j];
            const double pi = std::numbers::pi;
            fc.sine(0, j) = std::sin(pi * r.trunk[1] / r.extent[0])
                            * std::cos(0.5 * pi * r.trunk[2] / r.extent[1]);
            fc.sine(1, j) = std::sin(pi * r.trunk[2] / r.extent[1])
                            * std::cos(0.5 * pi * r.trunk[1] / r.extent[0]);
        }
        fc.pred(0, j) = u1 * fc.sine(0, j);
        fc.pred(1, j) = u2 * fc.sine(1, j);
    }
}

/// Reverse pass through one MLP given dL/d(output); overwrites grads.
void mlp_backward(const MLP& mlp, const std::vector<Eigen::MatrixXd>& acts,
                  Eigen::MatrixXd delta, std::vector<MLP::Layer>& grads) {
    const int L = (int)mlp.layers.size();
    grads.resize(L);
    for (int l = L - 1; l >= 0; --l) {
        if (l < L - 1)  // hidden layer: ReLU mask from the activations
            delta = delta.cwiseProduct(
                (acts[l + 1].array() > 0.0).cast<double>().matrix());
        grads[l].W = delta * acts[l].transpose();
        grads[l].b = delta.rowwise().sum();
        if (l > 0) delta = mlp.layers[l].W.transpose() * delta;
    }
}

}  // namespace

std::array<double, 2> deeponet_forward(const DeepONetModel& model, const DataRecord& r) {
    ForwardCache fc;
    forward_cached(model, std::span<const DataRecord>(&r, 1), fc);
    return {fc.pred(0, 0), fc.pred(1, 0)};
}

Eigen::MatrixXd deeponet_forward_batch(const DeepONetModel& model,
                                       std::span<const DataRecord> records) {
    ForwardCache fc;
    forward_cached(model, records, fc);
    return fc.pred;
}

double loss_and_gradients(const DeepONetModel& model, std::span<const DataRecord> batch,
                          ModelGradients& grads) {
    if (batch.empty()) throw std::invalid_argument("loss_and_gradients: empty batch");
    const int n = (int)batch.size();
    const int p = model.p;

    ForwardCache fc;
    forward_cached(model, batch, fc);

    Eigen::MatrixXd residual = fc.pred;
    for (int j = 0; j < n; ++j) {
        residual(0, j) -= batch[j].target[0];
        residual(1, j) -= batch[j].target[1];
    }
    const double loss = residual.squaredNorm() / (2.0 * n);

    // d(loss)/d(pred) = residual / n; augmentation factors are constants.
    const Eigen::MatrixXd dpred = residual / (double)n;
    const Eigen::MatrixXd duhat = dpred.cwiseProduct(fc.sine);

    const Eigen::MatrixXd& B = fc.branch_a.back();
    const Eigen::MatrixXd& C = fc.trunk_a.back();

    Eigen::MatrixXd dB(2 * p, n), dC(p, n);
    dB.topRows(p) = C.array().rowwise() * duhat.row(0).array();
    dB.bottomRows(p) = C.array().rowwise() * duhat.row(1).array();
    dC = (B.topRows(p).array().rowwise() * duhat.row(0).array()
          + B.bottomRows(p).array().rowwise() * duhat.row(1).array())
             .matrix();

    mlp_backward(model.branch, fc.branch_a, std::move(dB), grads.branch);
    mlp_backward(model.trunk, fc.trunk_a, std::move(dC), grads.trunk);
    return loss;
}

double mse_loss(const DeepONetModel& model, std::span<const DataRecord> records) {
    if (records.empty()) throw std::invalid_argument("mse_loss: empty record set");
    const Eigen::MatrixXd pred = deeponet_forward_batch(model, records);
    double sum = 0.0;
    for (int j = 0; j < (int)records.size(); ++j) {
        const double d1 = pred(0, j) - records[j].target[0];
        const double d2 = pred(1, j) - records[j].target[1];
        sum += d1 * d1 + d2 * d2;
    }
    return sum / (2.0 * records.size());
}

AdamState AdamState::zeros_like(const DeepONetModel& model) {
    AdamState st;
    auto zeros = [](const MLP& mlp, std::vector<MLP::Layer>& out) {
        for (const auto& layer : mlp.layers)
            out.push_back({Eigen::MatrixXd::Zero(layer.W.rows(), layer.W.cols()),
                           Eigen::VectorXd::Zero(layer.b.size())});
    };
    zeros(model.branch, st.m_branch);
    zeros(model.branch, st.v_branch);
    zeros(model.trunk, st.m_trunk);
    zeros(model.trunk, st.v_trunk);
    return st;
}

void adam_step(DeepONetModel& model, const ModelGradients& grads, AdamState& state,
               const TrainConfig& cfg) {
    state.step_count += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, (double)state.step_count);
    const double bc2 = 1.0 - std::pow(cfg.beta2, (double)state.step_count);

    auto update = [&](std::vector<MLP::Layer>& params, const std::vector<MLP::Layer>& g,
                      std::vector<MLP::Layer>& m, std::vector<MLP::Layer>& v) {
        for (std::size_t l = 0; l < params.size(); ++l) {
            m[l].W = cfg.beta1 * m[l].W + (1.0 - cfg.beta1) * g[l].W;
            m[l].b = cfg.beta1 * m[l].b + (1.0 - cfg.beta1) * g[l].b;
            v[l].W = cfg.beta2 * v[l].W + (1.0 - cfg.beta2) * g[l].W.cwiseProduct(g[l].W);
            v[l].b = cfg.beta2 * v[l].b + (1.0 - cfg.beta2) * g[l].b.cwiseProduct(g[l].b);
            params[l].W -= (cfg.learning_rate * (m[l].W / bc1).array()
                            / ((v[l].W / bc2).cwiseSqrt().array() + cfg.eps_hat))
                               .matrix();
            params[l].b -= (cfg.learning_rate * (m[l].b / bc1).array()
                            / ((v[l].b / bc2).cwiseSqrt().array() + cfg.eps_hat))
                               .matrix();
        }
    };
    update(model.branch.layers, grads.branch, state.m_branch, state.v_branch);
    update(model.trunk.layers, grads.trunk, state.m_trunk, state.v_trunk);
}

TrainHistory train(DeepONetModel& model, std::span<const DataRecord> train_records,
                   std::span<const DataRecord> val_records, const TrainConfig& cfg) {
    cfg.validate();
    if (train_records.empty() || val_records.empty())
        throw std::invalid_argument("train: empty split");

    TrainHistory history;
    history.train_mse.push_back(mse_loss(model, train_records));
    history.val_mse.push_back(mse_loss(model, val_records));

    AdamState state = AdamState::zeros_like(model);
    ModelGradients grads;
    std::vector<int> order(train_records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::vector<DataRecord> batch;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng rng = Rng::derive(cfg.seed, (std::uint64_t)epoch);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_index(i)]);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            batch.clear();
            for (std::size_t i = start; i < stop; ++i)
                batch.push_back(train_records[order[i]]);
            const double loss = loss_and_gradients(model, batch, grads);
            adam_step(model, grads, state, cfg);
            epoch_loss += loss * (double)batch.size();
        }
        history.train_mse.push_back(epoch_loss / (double)order.size());
        history.val_mse.push_back(mse_loss(model, val_records));
    }
    return history;
}

DeepONetModel warm_start(const DeepONetModel& prev) { return prev; }

void copy_parameters_into(DeepONetModel& dst, const DeepONetModel& src) {
    auto copy = [](std::vector<MLP::Layer>& d, const std::vector<MLP::Layer>& s) {
        if (d.size() != s.size()) throw std::invalid_argument("copy_parameters: layer count");
        for (std::size_t l = 0; l < d.size(); ++l) {
            if (d[l].W.rows() != s[l].W.rows() || d[l].W.cols() != s[l].W.cols())
                throw std::invalid_argument("copy_parameters: shape mismatch");
            d[l].W = s[l].W;
            d[l].b = s[l].b;
        }
    };
    if (dst.p != src.p) throw std::invalid_argument("copy_parameters: basis dimension");
    copy(dst.branch.layers, src.branch.layers);
    copy(dst.trunk.layers, src.trunk.layers);
}

FieldPrediction predict_field(const DeepONetModel& model, const VariableParams& vp,
                              const WoundGeometry& geometry,
                              std::span<const std::array<double, 3>> txy, int batch_size) {
    if (batch_size < 1) throw std::invalid_argument("predict_field: batch_size");
    const Vec2 ext = domain_extent(geometry);
    const auto quad = shape_quadruple(geometry);
    for (const auto& q : txy) {
        if (q[1] < -1e-12 || q[1] > ext.x() + 1e-12 || q[2] < -1e-12
            || q[2] > ext.y() + 1e-12)
            throw std::domain_error("predict_field: grid point outside the domain");
    }

    DataRecord proto;
    proto.branch = vp.as_array();
    proto.trunk = {0, 0, 0, quad[0], quad[1], quad[2], quad[3]};
    proto.extent = {ext.x(), ext.y()};

    FieldPrediction out;
    out.u.resize(txy.size());
    const auto t0 = std::chrono::steady_clock::now();

    // The branch depends only on the parameters: evaluate it once.
    const Eigen::VectorXd branch_out = mlp_forward_batch(
        model.branch,
        ((model.branch_raw(proto) - model.norm.branch_lo).array()
         / (model.norm.branch_hi - model.norm.branch_lo).array())
            .matrix());

    const int p = model.p;
    const int nt = model.trunk_input_dim();
    Eigen::MatrixXd Xt(nt, batch_size);
    for (std::size_t start = 0; start < txy.size(); start += batch_size) {
        const std::size_t stop = std::min(txy.size(), start + (std::size_t)batch_size);
        const int nb = (int)(stop - start);
        for (int j = 0; j < nb; ++j) {
            const auto& q = txy[start + j];
            Xt(0, j) = q[0];
            Xt(1, j) = q[1];
            Xt(2, j) = q[2];
            for (int k = 3; k < nt; ++k) Xt(k, j) = quad[k - 3];
        }
        const Eigen::MatrixXd C = mlp_forward_batch(
            model.trunk,
            normalize_batch(Xt.leftCols(nb), model.norm.trunk_lo, model.norm.trunk_hi));
        for (int j = 0; j < nb; ++j) {
            double u1 = branch_out.head(p).dot(C.col(j));
            double u2 = branch_out.tail(p).dot(C.col(j));
            if (model.ablation.sine_aug) {
                const auto& q = txy[start + j];
                const auto aug = sine_augment(u1, u2, q[1], q[2], ext.x(), ext.y());
                u1 = aug[0];
                u2 = aug[1];
            }
            out.u[start + j] = {u1, u2};
        }
    }
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------
// Persistence (versioned text container, exact round trip via %.17g)
// ---------------------------------------------------------------------------

namespace {

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    char buf[40];
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
            out << buf << ((c + 1 == m.cols()) ? "\n" : " ");
        }
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
    char buf[40];
    for (int i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        out << buf << ((i + 1 == v.size()) ? "\n" : " ");
    }
}

void write_mlp(std::ostream& out, const std::string& name, const MLP& mlp) {
    out << name << " " << mlp.layers.size() << "\n";
    for (const auto& layer : mlp.layers) {
        out << "layer " << layer.W.rows() << " " << layer.W.cols() << "\n";
        write_matrix(out, layer.W);
        write_vector(out, layer.b);
    }
}

MLP read_mlp(std::istream& in, const std::string& expected_name) {
    std::string name;
    std::size_t n_layers = 0;
    in >> name >> n_layers;
    if (name != expected_name)
        throw std::runtime_error("model file: expected " + expected_name);
    MLP mlp;
    for (std::size_t l = 0; l < n_layers; ++l) {
        std::string tag;
        int rows = 0, cols = 0;
        in >> tag >> rows >> cols;
        if (tag != "layer" || rows <= 0 || cols <= 0)
            throw std::runtime_error("model file: bad layer header");
        MLP::Layer layer;
        layer.W.resize(rows, cols);
        layer.b.resize(rows);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) in >> layer.W(r, c);
        for (int r = 0; r < rows; ++r) in >> layer.b(r);
        mlp.layers.push_back(std::move(layer));
    }
    return mlp;
}

Eigen::VectorXd read_vector(std::istream& in, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) in >> v[i];
    return v;
}

}  // namespace

void save_model(const DeepONetModel& model, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "woundsim-deeponet 1\n";
    f << "p " << model.p << "\n";
    f << "shape_info " << to_string(model.ablation.shape_info) << "\n";
    f << "sine_aug " << (model.ablation.sine_aug ? 1 : 0) << "\n";
    f << "norm " << model.norm.branch_lo.size() << " " << model.norm.trunk_lo.size() << "\n";
    write_vector(f, model.norm.branch_lo);
    write_vector(f, model.norm.branch_hi);
    write_vector(f, model.norm.trunk_lo);
    write_vector(f, model.norm.trunk_hi);
    write_mlp(f, "branch", model.branch);
    write_mlp(f, "trunk", model.trunk);
}

DeepONetModel load_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string magic;
    int version = 0;
    f >> magic >> version;
    if (magic != "woundsim-deeponet" || version != 1)
        throw std::runtime_error("unrecognized model file: " + path);

    DeepONetModel m;
    std::string key, shape;
    int sine = 0, nb = 0, nt = 0;
    f >> key >> m.p;
    if (key != "p") throw std::runtime_error("model file: expected p");
    f >> key >> shape;
    m.ablation.shape_info = shape_info_from_string(shape);
    f >> key >> sine;
    m.ablation.sine_aug = sine != 0;
    f >> key >> nb >> nt;
    m.norm.branch_lo = read_vector(f, nb);
    m.norm.branch_hi = read_vector(f, nb);
    m.norm.trunk_lo = read_vector(f, nt);
    m.norm.trunk_hi = read_vector(f, nt);
    m.branch = read_mlp(f, "branch");
    m.trunk = read_mlp(f, "trunk");

    if (!f) throw std::runtime_error("model file truncated: " + path);
    if (m.branch.output_dim() != 2 * m.p || m.trunk.output_dim() != m.p
        || m.branch.input_dim() != m.branch_input_dim()
        || m.trunk.input_dim() != m.trunk_input_dim())
        throw std::runtime_error("model file: inconsistent architecture");
    return m;
}

}  // namespace wsim
