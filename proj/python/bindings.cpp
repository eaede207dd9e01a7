// Python bindings for the main operations: geometry, simulation, dataset
// generation, surrogate training/evaluation, and metrics.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wsim/config.hpp"
#include "wsim/datapipe.hpp"
#include "wsim/deeponet.hpp"
#include "wsim/fem.hpp"
#include "wsim/metrics.hpp"

namespace py = pybind11;
using namespace wsim;

namespace {

WoundGeometry make_geometry(const std::string& kind, double x_cut, double y_cut,
                            const std::array<double, 3>& weights) {
    WoundGeometry g;
    g.kind = wound_kind_from_string(kind);
    g.x_cut = x_cut;
    g.y_cut = y_cut;
    g.weights = weights;
    return g;
}

py::array_t<double> curve_to_array(const BoundaryCurve& curve) {
    py::array_t<double> out({(py::ssize_t)curve.size(), (py::ssize_t)3});
    auto buf = out.mutable_unchecked<2>();
    for (py::ssize_t j = 0; j < (py::ssize_t)curve.size(); ++j) {
        buf(j, 0) = curve.s[j];
        buf(j, 1) = curve.points[j].x();
        buf(j, 2) = curve.points[j].y();
    }
    return out;
}

py::dict record_to_dict(const TimeRecord& rec) {
    py::dict d;
    const py::ssize_t n = (py::ssize_t)rec.nodes.size();
    py::array_t<double> nodes({n, (py::ssize_t)2});
    py::array_t<double> u({n, (py::ssize_t)2});
    py::array_t<double> fields({n, (py::ssize_t)4});
    auto bn = nodes.mutable_unchecked<2>();
    auto bu = u.mutable_unchecked<2>();
    auto bf = fields.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i) {
        bn(i, 0) = rec.nodes[i].x();
        bn(i, 1) = rec.nodes[i].y();
        bu(i, 0) = rec.u[2 * i];
        bu(i, 1) = rec.u[2 * i + 1];
        bf(i, 0) = rec.N[i];
        bf(i, 1) = rec.M[i];
        bf(i, 2) = rec.c[i];
        bf(i, 3) = rec.rho[i];
    }
    py::array_t<int> tris({(py::ssize_t)rec.triangles.size(), (py::ssize_t)3});
    auto bt = tris.mutable_unchecked<2>();
    for (py::ssize_t t = 0; t < (py::ssize_t)rec.triangles.size(); ++t)
        for (int k = 0; k < 3; ++k) bt(t, k) = rec.triangles[t][k];
    d["t"] = rec.t;
    d["nodes"] = nodes;
    d["triangles"] = tris;
    d["u"] = u;
    d["fields"] = fields;  // columns: N, M, c, rho
    d["rsaw"] = rec.rsaw;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Post-burn wound contraction simulator and operator-network surrogate";

    py::class_<KineticParams>(m, "KineticParams")
        .def(py::init<>())
        .def_readwrite("N_bar", &KineticParams::N_bar)
        .def_readwrite("M_bar", &KineticParams::M_bar)
        .def_readwrite("c_bar", &KineticParams::c_bar)
        .def_readwrite("rho_bar", &KineticParams::rho_bar)
        .def_readwrite("N_tilde", &KineticParams::N_tilde)
        .def_readwrite("c_tilde", &KineticParams::c_tilde)
        .def_readwrite("rho_tilde", &KineticParams::rho_tilde)
        .def_readwrite("xi", &KineticParams::xi)
        .def_readwrite("nu", &KineticParams::nu)
        .def("validate", &KineticParams::validate);

    py::class_<VariableParams>(m, "VariableParams")
        .def(py::init<>())
        .def_readwrite("D_F", &VariableParams::D_F)
        .def_readwrite("chi_F", &VariableParams::chi_F)
        .def_readwrite("D_c", &VariableParams::D_c)
        .def_readwrite("k_F", &VariableParams::k_F)
        .def_readwrite("a_c_I", &VariableParams::a_c_I)
        .def("as_array", &VariableParams::as_array);

    m.def("sample_variable_params",
          [](std::uint64_t seed) {
              Rng rng(seed);
              return sample_variable_params(rng);
          },
          py::arg("seed"));

    m.def("boundary_curve",
          [](const std::string& kind, double x_cut, double y_cut, int n_samples,
             const std::array<double, 3>& weights) {
              return curve_to_array(
                  boundary_curve(make_geometry(kind, x_cut, y_cut, weights), n_samples));
          },
          py::arg("kind"), py::arg("x_cut"), py::arg("y_cut"), py::arg("n_samples") = 256,
          py::arg("weights") = std::array<double, 3>{1.0, 0.0, 0.0},
          "Boundary samples as an (n, 3) array of (s, x, y)");

    m.def("domain_extent",
          [](double x_cut, double y_cut) {
              const Vec2 e = domain_extent(x_cut, y_cut);
              return std::array<double, 2>{e.x(), e.y()};
          });

    m.def("shape_quadruple", [](const std::string& kind, double x_cut, double y_cut,
                                const std::array<double, 3>& weights) {
        return shape_quadruple(make_geometry(kind, x_cut, y_cut, weights));
    }, py::arg("kind"), py::arg("x_cut"), py::arg("y_cut"),
       py::arg("weights") = std::array<double, 3>{1.0, 0.0, 0.0});

    m.def("run_simulation",
          [](const std::string& kind, double x_cut, double y_cut,
             const std::array<double, 3>& weights, const VariableParams& vp, double t_end,
             double dt, double record_every, int max_nodes, bool unwounded,
             double traction_scale) {
              SimConfig cfg;
              cfg.t_end = t_end;
              cfg.dt = dt;
              cfg.record_every = record_every;
              cfg.max_nodes = max_nodes;
              cfg.unwounded = unwounded;
              cfg.traction_scale = traction_scale;
              const KineticParams kp;
              const SimResult res =
                  run_simulation(cfg, make_geometry(kind, x_cut, y_cut, weights), vp, kp);
              py::dict out;
              out["times"] = res.times();
              out["rsaw"] = res.rsaw_series();
              out["remesh_count"] = res.remesh_count;
              out["wall_seconds"] = res.wall_seconds;
              py::list records;
              for (const auto& rec : res.records) records.append(record_to_dict(rec));
              out["records"] = records;
              return out;
          },
          py::arg("kind"), py::arg("x_cut"), py::arg("y_cut"),
          py::arg("weights") = std::array<double, 3>{1.0, 0.0, 0.0},
          py::arg("params") = VariableParams{}, py::arg("t_end") = 20.0,
          py::arg("dt") = 0.1, py::arg("record_every") = 1.0, py::arg("max_nodes") = 900,
          py::arg("unwounded") = false, py::arg("traction_scale") = 1.0);

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("size", &Dataset::size)
        .def_property_readonly("n_sims",
                               [](const Dataset& d) { return d.provenance.size(); })
        .def("to_csv", [](const Dataset& d, const std::string& path) {
            write_dataset_csv(d, path);
        });
    m.def("read_dataset_csv", &read_dataset_csv);

    m.def("generate_training_set",
          [](int n_sims, std::uint64_t seed, double t_end, int max_nodes, int jobs) {
              DataGenConfig cfg;
              cfg.n_sims = n_sims;
              cfg.seed = seed;
              cfg.sim.t_end = t_end;
              cfg.sim.max_nodes = max_nodes;
              cfg.jobs = jobs;
              return generate_training_set(cfg, KineticParams{});
          },
          py::arg("n_sims"), py::arg("seed") = 0, py::arg("t_end") = 100.0,
          py::arg("max_nodes") = 1500, py::arg("jobs") = 1);

    m.def("generate_convex_test_set",
          [](int n_sims, std::uint64_t seed, double t_end, int max_nodes, int jobs) {
              DataGenConfig cfg;
              cfg.n_sims = n_sims;
              cfg.seed = seed;
              cfg.sim.t_end = t_end;
              cfg.sim.max_nodes = max_nodes;
              cfg.jobs = jobs;
              return generate_convex_test_set(cfg, KineticParams{});
          },
          py::arg("n_sims"), py::arg("seed") = 0, py::arg("t_end") = 100.0,
          py::arg("max_nodes") = 900, py::arg("jobs") = 1);

    py::class_<DeepONetModel>(m, "DeepONetModel")
        .def_readonly("p", &DeepONetModel::p)
        .def("branch_input_dim", &DeepONetModel::branch_input_dim)
        .def("trunk_input_dim", &DeepONetModel::trunk_input_dim);

    py::class_<TrainHistory>(m, "TrainHistory")
        .def_readonly("train_mse", &TrainHistory::train_mse)
        .def_readonly("val_mse", &TrainHistory::val_mse);

    m.def("train_surrogate",
          [](Dataset& ds, int case_id, int p, int epochs, int batch_size, double lr,
             std::uint64_t seed) {
              split_dataset(ds, 0.8, seed);
              const auto train_records = gather(ds, ds.train_indices);
              const auto val_records = gather(ds, ds.val_indices);
              const Ablation ab = ablation_case(case_id);
              Rng rng = Rng::derive(seed, 7000 + (std::uint64_t)case_id);
              DeepONetModel model = DeepONetModel::create(
                  p, ab, make_normalization(train_records, ab), rng);
              TrainConfig tc;
              tc.epochs = epochs;
              tc.batch_size = batch_size;
              tc.learning_rate = lr;
              tc.seed = seed;
              TrainHistory history = train(model, train_records, val_records, tc);
              return py::make_tuple(model, history);
          },
          py::arg("dataset"), py::arg("case_id") = 5, py::arg("p") = 50,
          py::arg("epochs") = 100, py::arg("batch_size") = 100, py::arg("lr") = 1e-3,
          py::arg("seed") = 0);

    m.def("save_model", &save_model);
    m.def("load_model", &load_model);

    m.def("predict_field",
          [](const DeepONetModel& model, const VariableParams& vp, const std::string& kind,
             double x_cut, double y_cut, const std::array<double, 3>& weights,
             const std::vector<std::array<double, 3>>& txy, int batch_size) {
              const auto fp = predict_field(model, vp,
                                            make_geometry(kind, x_cut, y_cut, weights), txy,
                                            batch_size);
              py::array_t<double> u({(py::ssize_t)fp.u.size(), (py::ssize_t)2});
              auto bu = u.mutable_unchecked<2>();
              for (py::ssize_t i = 0; i < (py::ssize_t)fp.u.size(); ++i) {
                  bu(i, 0) = fp.u[i][0];
                  bu(i, 1) = fp.u[i][1];
              }
              return py::make_tuple(u, fp.seconds);
          },
          py::arg("model"), py::arg("params"), py::arg("kind"), py::arg("x_cut"),
          py::arg("y_cut"), py::arg("weights") = std::array<double, 3>{1.0, 0.0, 0.0},
          py::arg("txy"), py::arg("batch_size") = 50);

    m.def("evaluate",
          [](const DeepONetModel& model, const Dataset& ds) {
              std::vector<Displacement> truth, pred;
              const std::size_t chunk = 8192;
              for (std::size_t s = 0; s < ds.records.size(); s += chunk) {
                  const std::size_t e = std::min(ds.records.size(), s + chunk);
                  std::span<const DataRecord> view(ds.records.data() + s, e - s);
                  const Eigen::MatrixXd P = deeponet_forward_batch(model, view);
                  for (std::size_t j = 0; j < view.size(); ++j) {
                      truth.push_back(view[j].target);
                      pred.push_back({P(0, (int)j), P(1, (int)j)});
                  }
              }
              py::dict out;
              out["r2"] = r2_score(truth, pred);
              out["arrmse"] = arrmse(truth, pred);
              return out;
          },
          py::arg("model"), py::arg("dataset"));

    m.def("sine_augment", &sine_augment, py::arg("u1_hat"), py::arg("u2_hat"), py::arg("x"),
          py::arg("y"), py::arg("x_l"), py::arg("y_l"));

    m.attr("__version__") = "1.0.0";
}
