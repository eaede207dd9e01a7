#include "wsim/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

namespace wsim {

namespace {

using FieldRef = std::variant<double RunConfig::*, int RunConfig::*,
                              std::uint64_t RunConfig::*, bool RunConfig::*,
                              std::string RunConfig::*>;

struct FieldDef {
    const char* section;
    const char* key;
    FieldRef ref;
};

const std::vector<FieldDef>& schema() {
    static const std::vector<FieldDef> defs = {
        {"global", "version", &RunConfig::config_version},
        {"global", "seed", &RunConfig::seed},
        {"global", "out_dir", &RunConfig::out_dir},
        {"geometry", "kind", &RunConfig::geometry_kind},
        {"geometry", "x_cut", &RunConfig::x_cut},
        {"geometry", "y_cut", &RunConfig::y_cut},
        {"geometry", "weight1", &RunConfig::weight1},
        {"geometry", "weight2", &RunConfig::weight2},
        {"geometry", "weight3", &RunConfig::weight3},
        {"geometry", "boundary_samples", &RunConfig::boundary_samples},
        {"sim", "dt", &RunConfig::dt},
        {"sim", "t_end", &RunConfig::t_end},
        {"sim", "mesh_h", &RunConfig::mesh_h},
        {"sim", "max_nodes", &RunConfig::max_nodes},
        {"sim", "remesh_threshold", &RunConfig::remesh_threshold},
        {"sim", "limiter", &RunConfig::limiter},
        {"sim", "solver", &RunConfig::solver},
        {"sim", "solver_tol", &RunConfig::solver_tol},
        {"sim", "record_every", &RunConfig::record_every},
        {"sim", "unwounded", &RunConfig::unwounded},
        {"sim", "quasi_static", &RunConfig::quasi_static},
        {"sim", "traction_scale", &RunConfig::traction_scale},
        {"train", "p", &RunConfig::p},
        {"train", "hidden_width", &RunConfig::hidden_width},
        {"train", "hidden_layers", &RunConfig::hidden_layers},
        {"train", "learning_rate", &RunConfig::learning_rate},
        {"train", "batch_size", &RunConfig::batch_size},
        {"train", "epochs", &RunConfig::epochs},
        {"train", "split_fraction", &RunConfig::split_fraction},
        {"train", "split_granularity", &RunConfig::split_granularity},
        {"data", "n_sims", &RunConfig::n_sims},
        {"data", "n_test_sims", &RunConfig::n_test_sims},
        {"data", "n_time_draws", &RunConfig::n_time_draws},
        {"data", "n_space_draws", &RunConfig::n_space_draws},
        {"data", "jobs", &RunConfig::jobs},
        {"data", "year_s1_sims", &RunConfig::year_s1_sims},
        {"data", "year_s2_sims", &RunConfig::year_s2_sims},
        {"eval", "predict_batch", &RunConfig::predict_batch},
        {"eval", "bench_reps", &RunConfig::bench_reps},
    };
    return defs;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void set_field(RunConfig& cfg, const FieldDef& def, const std::string& value) {
    try {
        std::visit(
            [&](auto member) {
                using T = std::remove_cvref_t<decltype(cfg.*member)>;
                if constexpr (std::is_same_v<T, double>) {
                    cfg.*member = std::stod(value);
                } else if constexpr (std::is_same_v<T, int>) {
                    cfg.*member = std::stoi(value);
                } else if constexpr (std::is_same_v<T, std::uint64_t>) {
                    cfg.*member = std::stoull(value);
                } else if constexpr (std::is_same_v<T, bool>) {
                    if (value == "true" || value == "1") cfg.*member = true;
                    else if (value == "false" || value == "0") cfg.*member = false;
                    else throw std::invalid_argument("expected true/false");
                } else {
                    cfg.*member = value;
                }
            },
            def.ref);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("config: bad value for ") + def.section + "."
                                    + def.key + ": " + value);
    }
}

std::string get_field(const RunConfig& cfg, const FieldDef& def) {
    return std::visit(
        [&](auto member) -> std::string {
            using T = std::remove_cvref_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, double>) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.17g", cfg.*member);
                return buf;
            } else if constexpr (std::is_same_v<T, bool>) {
                return (cfg.*member) ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return cfg.*member;
            } else {
                return std::to_string(cfg.*member);
            }
        },
        def.ref);
}

}  // namespace

WoundGeometry RunConfig::geometry() const {
    WoundGeometry g;
    g.kind = wound_kind_from_string(geometry_kind);
    g.x_cut = x_cut;
    g.y_cut = y_cut;
    g.weights = {weight1, weight2, weight3};
    return g;
}

SimConfig RunConfig::sim_config() const {
    SimConfig s;
    s.dt = dt;
    s.t_end = t_end;
    s.mesh_h = mesh_h;
    s.max_nodes = max_nodes;
    s.remesh_threshold = remesh_threshold;
    if (limiter == "fct") s.limiter = SimConfig::Limiter::Fct;
    else if (limiter == "clip") s.limiter = SimConfig::Limiter::Clip;
    else throw std::invalid_argument("config: sim.limiter must be fct or clip");
    if (solver == "iterative") s.solver = SimConfig::Solver::Iterative;
    else if (solver == "direct") s.solver = SimConfig::Solver::Direct;
    else throw std::invalid_argument("config: sim.solver must be iterative or direct");
    s.solver_tol = solver_tol;
    s.record_every = record_every;
    s.unwounded = unwounded;
    s.quasi_static = quasi_static;
    s.traction_scale = traction_scale;
    return s;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig t;
    t.learning_rate = learning_rate;
    t.batch_size = batch_size;
    t.epochs = epochs;
    t.seed = seed;
    return t;
}

DataGenConfig RunConfig::datagen_config() const {
    DataGenConfig d;
    d.n_sims = n_sims;
    d.n_time_draws = n_time_draws;
    d.n_space_draws = n_space_draws;
    d.seed = seed;
    d.jobs = jobs;
    d.sim = sim_config();
    return d;
}

SplitGranularity RunConfig::granularity() const {
    if (split_granularity == "record") return SplitGranularity::Record;
    if (split_granularity == "simulation") return SplitGranularity::Simulation;
    throw std::invalid_argument("config: train.split_granularity must be record or simulation");
}

void RunConfig::validate() const {
    if (config_version != 1)
        throw std::invalid_argument("config: unsupported version "
                                    + std::to_string(config_version));
    geometry();        // kind parse
    sim_config().validate();
    train_config().validate();
    granularity();
    if (p < 1 || hidden_width < 1 || hidden_layers < 1)
        throw std::invalid_argument("config: network dimensions must be positive");
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw std::invalid_argument("config: train.split_fraction must lie in (0,1)");
    if (n_sims < 1 || n_test_sims < 1 || n_time_draws < 1 || n_space_draws < 1 || jobs < 1)
        throw std::invalid_argument("config: data counts must be positive");
    if (year_s1_sims < 1 || year_s2_sims < 1)
        throw std::invalid_argument("config: year scenario sizes must be positive");
    if (predict_batch < 1 || bench_reps < 1)
        throw std::invalid_argument("config: eval settings must be positive");
    if (boundary_samples < 3)
        throw std::invalid_argument("config: geometry.boundary_samples must be >= 3");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section = "global";
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config: malformed section at line "
                                            + std::to_string(line_no));
            section = trim(t.substr(1, t.size() - 2));
            bool known = false;
            for (const auto& def : schema()) known |= section == def.section;
            if (!known)
                throw std::invalid_argument("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line "
                                        + std::to_string(line_no));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        bool found = false;
        for (const auto& def : schema()) {
            if (section == def.section && key == def.key) {
                set_field(cfg, def, value);
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("config: unknown key " + section + "." + key);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    std::string current;
    for (const auto& def : schema()) {
        if (current != def.section) {
            current = def.section;
            if (!out.empty()) out += "\n";
            out += "[" + current + "]\n";
        }
        out += std::string(def.key) + " = " + get_field(cfg, def) + "\n";
    }
    return out;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like section.key=value: " + assignment);
    const std::string path = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    const auto dot = path.find('.');
    const std::string section = dot == std::string::npos ? "global" : path.substr(0, dot);
    const std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
    for (const auto& def : schema()) {
        if (section == def.section && key == def.key) {
            set_field(cfg, def, value);
            return;
        }
    }
    throw std::invalid_argument("override: unknown key " + section + "." + key);
}

}  // namespace wsim
