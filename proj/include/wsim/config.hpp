// Run configuration: a sectioned key-value text format covering every
// tunable default of the pipeline, with strict unknown-key rejection, a
// canonical serialization, and a stable hash recorded in all outputs.

#pragma once

#include <cstdint>
#include <string>

#include "wsim/datapipe.hpp"
#include "wsim/deeponet.hpp"
#include "wsim/fem.hpp"
#include "wsim/geometry.hpp"

namespace wsim {

struct RunConfig {
    // global
    int config_version = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "runs";

    // [geometry]
    std::string geometry_kind = "rectangle";
    double x_cut = 0.3;
    double y_cut = 0.15;
    double weight1 = 1.0, weight2 = 0.0, weight3 = 0.0;  // convex only
    int boundary_samples = 256;

    // [sim]
    double dt = 0.1;
    double t_end = 20.0;
    double mesh_h = 0.0;  // 0 = automatic
    int max_nodes = 3500;
    double remesh_threshold = 0.5;
    std::string limiter = "fct";      // fct | clip
    std::string solver = "iterative"; // iterative | direct
    double solver_tol = 1e-8;
    double record_every = 1.0;
    bool unwounded = false;
    bool quasi_static = false;
    double traction_scale = 1.0;

    // [train]
    int p = 50;
    int hidden_width = 50;
    int hidden_layers = 3;
    double learning_rate = 1e-3;
    int batch_size = 100;
    int epochs = 100;
    double split_fraction = 0.8;
    std::string split_granularity = "record";  // record | simulation

    // [data]
    int n_sims = 30;
    int n_test_sims = 10;
    int n_time_draws = 10;
    int n_space_draws = 20;
    int jobs = 1;
    int year_s1_sims = 5;
    int year_s2_sims = 15;

    // [eval]
    int predict_batch = 50;
    int bench_reps = 3;

    WoundGeometry geometry() const;
    SimConfig sim_config() const;
    TrainConfig train_config() const;
    DataGenConfig datagen_config() const;
    SplitGranularity granularity() const;

    /// Throws std::invalid_argument on any out-of-range value.
    void validate() const;
};

/// Parses the sectioned config text. Unknown sections or keys are an error.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Canonical serialization: every key in schema order.
std::string serialize_config(const RunConfig& config);

/// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Applies one `section.key=value` override.
void apply_override(RunConfig& config, const std::string& assignment);

}  // namespace wsim
