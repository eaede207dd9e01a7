// Command-line front end: simulate, dataset generation, training,
// evaluation, prediction, speedup benchmarking, and plot-data export.
// Progress goes to stderr; machine-readable artifacts go to files under a
// run directory named by config hash and timestamp.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "wsim/config.hpp"
#include "wsim/datapipe.hpp"
#include "wsim/deeponet.hpp"
#include "wsim/fem.hpp"
#include "wsim/metrics.hpp"

namespace fs = std::filesystem;
using namespace wsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;
constexpr int kExitData = 4;
constexpr int kExitTraining = 5;

struct CliState {
    RunConfig cfg;
    std::string hash;
    std::string run_dir_override;
};

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::localtime(&tt));
    return buf;
}

/// Creates the run directory (hash + timestamp naming) and records the
/// exact configuration inside it.
std::string make_run_dir(const CliState& state, const std::string& name) {
    std::string dir = state.run_dir_override;
    if (dir.empty()) {
        const std::string base = state.cfg.out_dir + "/" + name + "-"
                                 + state.hash.substr(0, 8) + "-" + timestamp();
        dir = base;
        for (int k = 1; fs::exists(dir); ++k) dir = base + "-" + std::to_string(k);
    }
    fs::create_directories(dir);
    std::ofstream cfg_file(dir + "/config");
    cfg_file << serialize_config(state.cfg);
    std::ofstream hash_file(dir + "/config_hash");
    hash_file << state.hash << "\n";
    return dir;
}

VariableParams load_variable_params(const std::string& params_path) {
    VariableParams vp;
    if (!params_path.empty()) {
        KineticParams scratch;
        read_params_file(params_path, scratch, vp);
    }
    return vp;
}

KineticParams load_kinetic_params(const std::string& params_path) {
    KineticParams kp;
    if (!params_path.empty()) {
        VariableParams scratch;
        read_params_file(params_path, kp, scratch);
    }
    kp.validate();
    return kp;
}

std::vector<int> parse_cases(const std::string& spec) {
    if (spec == "all") return {1, 2, 3, 4, 5};
    if (spec == "final") return {5};
    return {std::stoi(spec)};
}

std::vector<int> hidden_dims(const RunConfig& cfg) {
    return std::vector<int>((std::size_t)cfg.hidden_layers, cfg.hidden_width);
}

void write_loss_history(const TrainHistory& history, const std::string& path) {
    std::ofstream f(path);
    f << "epoch,train_mse,val_mse\n";
    char buf[96];
    for (std::size_t e = 0; e < history.train_mse.size(); ++e) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", e, history.train_mse[e],
                      history.val_mse[e]);
        f << buf;
    }
}

/// Forward pass over a dataset in chunks; returns truth/pred pairs and the
/// record times.
struct EvalVectors {
    std::vector<Displacement> truth, pred;
    std::vector<double> times;
};

EvalVectors evaluate_records(const DeepONetModel& model,
                             const std::vector<DataRecord>& records) {
    EvalVectors out;
    out.truth.reserve(records.size());
    out.pred.reserve(records.size());
    out.times.reserve(records.size());
    const std::size_t chunk = 8192;
    for (std::size_t start = 0; start < records.size(); start += chunk) {
        const std::size_t stop = std::min(records.size(), start + chunk);
        const std::span<const DataRecord> view(records.data() + start, stop - start);
        const Eigen::MatrixXd pred = deeponet_forward_batch(model, view);
        for (std::size_t j = 0; j < view.size(); ++j) {
            out.truth.push_back(view[j].target);
            out.pred.push_back({pred(0, (int)j), pred(1, (int)j)});
            out.times.push_back(view[j].trunk[0]);
        }
    }
    return out;
}

/// Target and surrogate RSAW curves for one simulation of the configured
/// geometry, evaluated on the deformed/predicted rim polygons.
void rsaw_comparison_files(const DeepONetModel& model, const RunConfig& cfg,
                           const KineticParams& kp, const VariableParams& vp,
                           EvalReport& report) {
    const WoundGeometry geom = cfg.geometry();
    const SimResult sim = run_simulation(cfg.sim_config(), geom, vp, kp);

    // Undeformed rim coordinates from the initial record.
    const std::vector<Vec2> rim0 = sim.records.front().rim;
    std::vector<Vec2> closed0 = rim0;
    closed0.push_back(Vec2(0, 0));
    const double area0 = polygon_area(closed0);

    report.rsaw_times = sim.times();
    report.rsaw_target = sim.rsaw_series();
    report.rsaw_predicted.clear();
    std::vector<std::array<double, 3>> grid(rim0.size());
    for (double t : report.rsaw_times) {
        for (std::size_t i = 0; i < rim0.size(); ++i)
            grid[i] = {t, rim0[i].x(), rim0[i].y()};
        const FieldPrediction fp = predict_field(model, vp, geom, grid, cfg.predict_batch);
        std::vector<Vec2> displaced(rim0.size());
        for (std::size_t i = 0; i < rim0.size(); ++i)
            displaced[i] = rim0[i] + Vec2(fp.u[i][0], fp.u[i][1]);
        displaced.push_back(Vec2(0, 0));
        report.rsaw_predicted.push_back(polygon_area(displaced) / area0);
    }
    report.rsaw = rsaw_compare(report.rsaw_times, report.rsaw_target, report.rsaw_predicted);
    report.has_rsaw = true;
}

int run_simulate(const CliState& state, const std::string& params_path) {
    const std::string dir = make_run_dir(state, "simulate");
    try {
        const KineticParams kp = load_kinetic_params(params_path);
        const VariableParams vp = load_variable_params(params_path);
        std::cerr << "[woundsim] simulate -> " << dir << "\n";
        const WoundGeometry geom = state.cfg.geometry();
        const SimResult result = run_simulation(state.cfg.sim_config(), geom, vp, kp);
        save_result(result, dir);
        write_curve_csv(boundary_curve(geom, state.cfg.boundary_samples),
                        dir + "/boundary_curve.csv");
        const BoundaryTrace trace = wound_boundary_trace(result);
        std::ofstream summary(dir + "/trace_summary");
        summary << "argmin_time = " << trace.argmin_time << "\n"
                << "min_rsaw = " << trace.min_value << "\n"
                << "final_rsaw = " << trace.final_value << "\n";
        std::cerr << "[woundsim] done: min RSAW " << trace.min_value << " at day "
                  << trace.argmin_time << ", final " << trace.final_value << "\n";
        return kExitOk;
    } catch (const std::exception& err) {
        std::cerr << "woundsim: simulation failed: " << err.what() << "\n";
        return kExitSimulation;
    }
}

int run_gen(const CliState& state, const std::string& mode, const std::string& base_path,
            const std::string& scenario, const std::string& params_path) {
    const std::string dir = make_run_dir(state, mode);
    try {
        const KineticParams kp = load_kinetic_params(params_path);
        DataGenConfig gen = state.cfg.datagen_config();
        std::cerr << "[woundsim] " << mode << " -> " << dir << "\n";
        if (mode == "gen-train") {
            Dataset ds = generate_training_set(gen, kp);
            write_dataset_csv(ds, dir + "/train_data.csv", state.hash);
            std::cerr << "[woundsim] " << ds.records.size() << " records from "
                      << ds.provenance.size() << " simulations\n";
        } else if (mode == "gen-test") {
            gen.n_sims = state.cfg.n_test_sims;
            Dataset ds = generate_convex_test_set(gen, kp);
            write_dataset_csv(ds, dir + "/test_data.csv", state.hash);
            std::cerr << "[woundsim] " << ds.records.size() << " records from "
                      << ds.provenance.size() << " simulations\n";
        } else {  // gen-year
            Dataset base;
            try {
                base = read_dataset_csv(base_path);
            } catch (const std::exception& err) {
                std::cerr << "woundsim: cannot read base dataset: " << err.what() << "\n";
                return kExitData;
            }
            const YearScenario ys = scenario == "s1"
                                        ? year_scenario_s1(state.cfg.year_s1_sims)
                                        : year_scenario_s2(state.cfg.year_s2_sims);
            const Dataset ext = extend_year_dataset(base, ys, gen, kp);
            write_dataset_csv(ext, dir + "/year_" + scenario + ".csv", state.hash);
            std::cerr << "[woundsim] " << ext.records.size() - base.records.size()
                      << " records appended\n";
        }
        return kExitOk;
    } catch (const std::exception& err) {
        std::cerr << "woundsim: data generation failed: " << err.what() << "\n";
        return kExitSimulation;
    }
}

int run_train(const CliState& state, const std::string& data_path,
              const std::string& case_arg, const std::string& warm_start_path) {
    Dataset ds;
    try {
        ds = read_dataset_csv(data_path);
        if (ds.records.size() < 10) throw std::runtime_error("dataset too small");
    } catch (const std::exception& err) {
        std::cerr << "woundsim: cannot load training data: " << err.what() << "\n";
        return kExitData;
    }
    const std::string dir = make_run_dir(state, "train");
    try {
        split_dataset(ds, state.cfg.split_fraction, state.cfg.seed,
                      ds.provenance.empty() ? SplitGranularity::Record
                                            : state.cfg.granularity());
        const std::vector<DataRecord> train_records = gather(ds, ds.train_indices);
        const std::vector<DataRecord> val_records = gather(ds, ds.val_indices);
        std::cerr << "[woundsim] train -> " << dir << " (" << train_records.size() << "/"
                  << val_records.size() << " records)\n";

        for (int case_id : parse_cases(case_arg)) {
            const Ablation ablation = ablation_case(case_id);
            const std::string name = ablation_case_name(case_id);
            DeepONetModel model = [&] {
                if (!warm_start_path.empty()) return warm_start(load_model(warm_start_path));
                Rng rng = Rng::derive(state.cfg.seed, 7000 + (std::uint64_t)case_id);
                return DeepONetModel::create(state.cfg.p, ablation,
                                             make_normalization(train_records, ablation),
                                             rng, hidden_dims(state.cfg));
            }();
            const TrainHistory history =
                train(model, train_records, val_records, state.cfg.train_config());
            save_model(model, dir + "/model_" + name + ".model");
            write_loss_history(history, dir + "/loss_history_" + name + ".csv");
            std::cerr << "[woundsim] " << name << ": val MSE " << history.val_mse.front()
                      << " -> " << history.val_mse.back() << "\n";
        }
        return kExitOk;
    } catch (const std::exception& err) {
        std::cerr << "woundsim: training failed: " << err.what() << "\n";
        return kExitTraining;
    }
}

int run_eval(const CliState& state, const std::string& data_path,
             const std::string& model_path, const std::string& models_dir,
             bool all_ablations, bool with_rsaw, bool dump_predictions,
             const std::string& params_path) {
    Dataset ds;
    try {
        ds = read_dataset_csv(data_path);
        if (ds.records.empty()) throw std::runtime_error("empty dataset");
    } catch (const std::exception& err) {
        std::cerr << "woundsim: cannot load evaluation data: " << err.what() << "\n";
        return kExitData;
    }
    const std::string dir = make_run_dir(state, "eval");
    try {
        struct Entry {
            std::string name;
            std::string path;
        };
        std::vector<Entry> entries;
        if (all_ablations) {
            for (int case_id = 1; case_id <= 5; ++case_id) {
                const std::string name = ablation_case_name(case_id);
                entries.push_back({name, models_dir + "/model_" + name + ".model"});
            }
        } else {
            entries.push_back({"model", model_path});
        }

        std::ofstream table(dir + "/ablation_table.csv");
        table << "model,r2,arrmse,arelerr\n";
        for (const Entry& entry : entries) {
            const DeepONetModel model = load_model(entry.path);
            const EvalVectors ev = evaluate_records(model, ds.records);
            EvalReport report;
            report.r2 = r2_score(ev.truth, ev.pred);
            report.arrmse = arrmse(ev.truth, ev.pred);
            try {
                report.arelerr = arelerr(ev.truth, ev.pred);
            } catch (const std::domain_error&) {
                // Every rounded truth is zero: the metric is undefined here.
                report.arelerr = std::numeric_limits<double>::quiet_NaN();
                std::cerr << "[woundsim] " << entry.name
                          << ": aRelErr undefined (all rounded truths are zero)\n";
            }
            report.n_records = (long)ds.records.size();
            report.profile = abs_error_profile(ev.times, ev.truth, ev.pred);
            if (with_rsaw) {
                const KineticParams kp = load_kinetic_params(params_path);
                const VariableParams vp = load_variable_params(params_path);
                rsaw_comparison_files(model, state.cfg, kp, vp, report);
            }
            write_eval_report(report, dir + "/" + entry.name);
            if (dump_predictions) {
                std::ofstream pf(dir + "/" + entry.name + "/predictions.csv");
                pf << "t,x,y,u1,u2,u1_pred,u2_pred\n";
                char buf[256];
                for (std::size_t i = 0; i < ds.records.size(); ++i) {
                    const auto& r = ds.records[i];
                    std::snprintf(buf, sizeof(buf),
                                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                                  r.trunk[0], r.trunk[1], r.trunk[2], r.target[0],
                                  r.target[1], ev.pred[i][0], ev.pred[i][1]);
                    pf << buf;
                }
            }
            char row[160];
            std::snprintf(row, sizeof(row), "%s,%.17g,%.17g,%.17g\n", entry.name.c_str(),
                          report.r2, report.arrmse, report.arelerr);
            table << row;
            std::cerr << "[woundsim] " << entry.name << ": R2 " << report.r2 << " aRRMSE "
                      << report.arrmse << " aRelErr " << report.arelerr << "\n";
        }
        std::cerr << "[woundsim] eval -> " << dir << "\n";
        return kExitOk;
    } catch (const std::exception& err) {
        std::cerr << "woundsim: evaluation failed: " << err.what() << "\n";
        return kExitData;
    }
}

int run_predict(const CliState& state, const std::string& model_path, int nx, int ny,
                int nt, const std::string& params_path) {
    const std::string dir = make_run_dir(state, "predict");
    try {
        const DeepONetModel model = load_model(model_path);
        const VariableParams vp = load_variable_params(params_path);
        const WoundGeometry geom = state.cfg.geometry();
        const Vec2 ext = domain_extent(geom);

        std::vector<std::array<double, 3>> grid;
        grid.reserve((std::size_t)nx * ny * nt);
        for (int it = 0; it < nt; ++it) {
            const double t = state.cfg.t_end * it / std::max(1, nt - 1);
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    grid.push_back({t, ext.x() * i / (nx - 1), ext.y() * j / (ny - 1)});
        }
        const FieldPrediction fp = predict_field(model, vp, geom, grid,
                                                 state.cfg.predict_batch);

        std::ofstream out(dir + "/predictions.csv");
        out << "t,x,y,u1,u2\n";
        char buf[192];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", grid[i][0],
                          grid[i][1], grid[i][2], fp.u[i][0], fp.u[i][1]);
            out << buf;
        }
        std::ofstream timing(dir + "/timing");
        timing << "points = " << grid.size() << "\n"
               << "seconds = " << fp.seconds << "\n";
        std::cerr << "[woundsim] predict: " << grid.size() << " points in " << fp.seconds
                  << " s -> " << dir << "\n";
        return kExitOk;
    } catch (const std::exception& err) {
        std::cerr << "woundsim: prediction failed: " << err.what() << "\n";
        return kExitData;
    }
}

int run_bench(const CliState& state, const std::string& model_path,
              const std::string& params_path) {
    const std::string dir = make_run_dir(state, "bench");
    try {
        const DeepONetModel model = load_model(model_path);
        const KineticParams kp = load_kinetic_params(params_path);
        const VariableParams vp = load_variable_params(params_path);
        const WoundGeometry geom = state.cfg.geometry();
        const SimConfig sim_cfg = state.cfg.sim_config();

        // Workload definition: displacement at every initial mesh node and
        // every recorded time (the simulator produces it as a byproduct of
        // one run; the surrogate evaluates the same grid).
        const SimResult reference = run_simulation(sim_cfg, geom, vp, kp);
        const auto& nodes0 = reference.records.front().nodes;
        const std::vector<double> times = reference.times();
        std::vector<std::array<double, 3>> full_grid, boundary_grid;
        for (double t : times) {
            for (const Vec2& p : nodes0) full_grid.push_back({t, p.x(), p.y()});
            for (const Vec2& p : reference.records.front().rim)
                boundary_grid.push_back({t, p.x(), p.y()});
        }

        const TimingReport full = bench_speedup(
            [&] { run_simulation(sim_cfg, geom, vp, kp); },
            [&] { predict_field(model, vp, geom, full_grid, state.cfg.predict_batch); },
            state.cfg.bench_reps);
        const TimingReport boundary = bench_speedup(
            [&] {},
            [&] { predict_field(model, vp, geom, boundary_grid, state.cfg.predict_batch); },
            state.cfg.bench_reps);

        std::ofstream report(dir + "/bench_report");
        report << "grid_points = " << full_grid.size() << "\n"
               << "boundary_points = " << boundary_grid.size() << "\n"
               << "repetitions = " << full.repetitions << "\n"
               << "simulator_seconds = " << full.simulator_seconds << "\n"
               << "surrogate_seconds = " << full.surrogate_seconds << "\n"
               << "speedup = " << full.speedup << "\n"
               << "surrogate_boundary_seconds = " << boundary.surrogate_seconds << "\n"
               << "boundary_vs_full = "
               << (boundary.surrogate_seconds > 0.0
                       ? full.surrogate_seconds / boundary.surrogate_seconds
                       : 0.0)
               << "\n";
        std::cerr << "[woundsim] bench: simulator " << full.simulator_seconds
                  << " s, surrogate " << full.surrogate_seconds << " s, speedup "
                  << full.speedup << "x -> " << dir << "\n";
        return kExitOk;
    } catch (const std::exception& err) {
        std::cerr << "woundsim: benchmark failed: " << err.what() << "\n";
        return kExitSimulation;
    }
}

int run_export_plot(const CliState& state, const std::string& from) {
    const std::string dir = from + "/plots";
    try {
        if (!fs::exists(from)) throw std::runtime_error("run directory not found: " + from);
        fs::create_directories(dir);
        int emitted = 0;

        for (const auto& entry : fs::recursive_directory_iterator(from)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            const std::string parent = entry.path().parent_path().filename().string();
            if (parent == "plots") continue;
            // Loss curves and RSAW series are already plot-ready tables.
            if (name.rfind("loss_history_", 0) == 0 || name == "rsaw.csv"
                || name == "abs_error_profile.csv" || name == "rsaw_compare.csv") {
                std::string out = dir + "/plot_" + (parent.empty() ? "" : parent + "_") + name;
                if (name.rfind("loss_history_", 0) == 0) out = dir + "/plot_" + name;
                fs::copy_file(entry.path(), out, fs::copy_options::overwrite_existing);
                ++emitted;
            }
            // True-vs-predicted scatter data from dumped predictions.
            if (name == "predictions.csv" && parent != "plots") {
                std::ifstream in(entry.path());
                std::string header;
                std::getline(in, header);
                if (header.rfind("t,x,y,u1,u2,u1_pred", 0) == 0) {
                    std::ofstream s1(dir + "/plot_scatter_" + parent + "_u1.csv");
                    std::ofstream s2(dir + "/plot_scatter_" + parent + "_u2.csv");
                    s1 << "true,pred\n";
                    s2 << "true,pred\n";
                    std::string line;
                    while (std::getline(in, line)) {
                        std::stringstream ss(line);
                        std::string cell;
                        std::vector<std::string> cells;
                        while (std::getline(ss, cell, ',')) cells.push_back(cell);
                        if (cells.size() != 7) continue;
                        s1 << cells[3] << "," << cells[5] << "\n";
                        s2 << cells[4] << "," << cells[6] << "\n";
                    }
                    emitted += 2;
                }
            }
        }
        (void)state;
        std::cerr << "[woundsim] export-plot: " << emitted << " files -> " << dir << "\n";
        return emitted > 0 ? kExitOk : kExitData;
    } catch (const std::exception& err) {
        std::cerr << "woundsim: export-plot failed: " << err.what() << "\n";
        return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Post-burn wound contraction simulator with an operator-network surrogate"};
    app.require_subcommand(1);

    std::string config_path, run_dir_override, params_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "Configuration file (sectioned key = value)");
    app.add_option("--set", overrides, "Override, e.g. --set sim.t_end=50")->take_all();
    app.add_option("--run-dir", run_dir_override,
                   "Fixed output directory (default: <out>/<cmd>-<hash>-<timestamp>)");
    app.add_option("--params", params_path, "Parameter file (name = value per line)");

    auto* simulate = app.add_subcommand("simulate", "Run one finite-element simulation");

    auto* gen_train = app.add_subcommand("gen-train", "Generate the training dataset");
    auto* gen_test = app.add_subcommand("gen-test", "Generate the convex test dataset");
    auto* gen_year = app.add_subcommand("gen-year", "Extend a dataset with year-horizon runs");
    std::string base_path, scenario = "s1";
    gen_year->add_option("--base", base_path, "Base dataset CSV")->required();
    gen_year->add_option("--scenario", scenario, "s1 (few sims, many times) or s2")
        ->check(CLI::IsMember({"s1", "s2"}));

    auto* train_cmd = app.add_subcommand("train", "Train the surrogate");
    std::string data_path, case_arg = "final", warm_start_path;
    train_cmd->add_option("--data", data_path, "Training dataset CSV")->required();
    train_cmd->add_option("--case", case_arg, "1..5, final, or all");
    train_cmd->add_option("--warm-start", warm_start_path, "Initialize from a model file");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a dataset");
    std::string eval_data, model_path, models_dir;
    bool all_ablations = false, with_rsaw = false, dump_predictions = false;
    eval_cmd->add_option("--data", eval_data, "Evaluation dataset CSV")->required();
    eval_cmd->add_option("--model", model_path, "Model file");
    eval_cmd->add_option("--models-dir", models_dir, "Directory with the five case models");
    eval_cmd->add_flag("--ablation", all_ablations, "Evaluate all five configurations");
    eval_cmd->add_flag("--rsaw", with_rsaw, "Compare RSAW curves on one simulation");
    eval_cmd->add_flag("--dump-predictions", dump_predictions, "Write per-record predictions");

    auto* predict_cmd = app.add_subcommand("predict", "Evaluate the surrogate on a grid");
    std::string predict_model;
    int nx = 50, ny = 25, nt = 21;
    predict_cmd->add_option("--model", predict_model, "Model file")->required();
    predict_cmd->add_option("--nx", nx, "Grid points in x");
    predict_cmd->add_option("--ny", ny, "Grid points in y");
    predict_cmd->add_option("--nt", nt, "Time samples in [0, t_end]");

    auto* bench_cmd = app.add_subcommand("bench", "Simulator vs surrogate speedup");
    std::string bench_model;
    bench_cmd->add_option("--model", bench_model, "Model file")->required();

    auto* export_cmd = app.add_subcommand("export-plot", "Emit plot-ready CSV files");
    std::string from_dir;
    export_cmd->add_option("--from", from_dir, "Run directory to export from")->required();

    CLI11_PARSE(app, argc, argv);

    CliState state;
    try {
        if (!config_path.empty()) state.cfg = load_config_file(config_path);
        for (const std::string& assignment : overrides)
            apply_override(state.cfg, assignment);
        state.cfg.validate();
        state.hash = config_hash(state.cfg);
        state.run_dir_override = run_dir_override;
    } catch (const std::exception& err) {
        std::cerr << "woundsim: configuration error: " << err.what() << "\n";
        return kExitConfig;
    }

    if (simulate->parsed()) return run_simulate(state, params_path);
    if (gen_train->parsed()) return run_gen(state, "gen-train", "", "", params_path);
    if (gen_test->parsed()) return run_gen(state, "gen-test", "", "", params_path);
    if (gen_year->parsed()) return run_gen(state, "gen-year", base_path, scenario, params_path);
    if (train_cmd->parsed()) return run_train(state, data_path, case_arg, warm_start_path);
    if (eval_cmd->parsed())
        return run_eval(state, eval_data, model_path, models_dir, all_ablations, with_rsaw,
                        dump_predictions, params_path);
    if (predict_cmd->parsed()) return run_predict(state, predict_model, nx, ny, nt, params_path);
    if (bench_cmd->parsed()) return run_bench(state, bench_model, params_path);
    if (export_cmd->parsed()) return run_export_plot(state, from_dir);
    return kExitConfig;
}
