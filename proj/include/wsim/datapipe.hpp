// Dataset generation from simulator output: training sets over the three
// basic wound shapes, convex-combination test sets, record/simulation
// splits, year-extension scenarios, and CSV persistence.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsim/dataset.hpp"
#include "wsim/fem.hpp"

namespace wsim {

struct DataGenConfig {
    int n_sims = 30;
    int n_time_draws = 10;   // uniform draws from the recorded time grid
    int n_space_draws = 20;  // uniform draws over the undeformed domain
    std::uint64_t seed = 0;
    int jobs = 1;            // simulation-level parallelism
    SimConfig sim;           // t_end, dt, mesh controls

    void validate() const;
};

/// Uniform shape choice, uniform cuts in (0,5) cm, sampled variable
/// parameters, one simulation per sample; 10x20 records each by default.
/// Failed simulations are logged to stderr and skipped.
Dataset generate_training_set(const DataGenConfig& config, const KineticParams& kp);

/// Convex-combination geometries; records at every recorded time and every
/// mesh node (displacements read at the undeformed node positions).
Dataset generate_convex_test_set(const DataGenConfig& config, const KineticParams& kp);

enum class SplitGranularity { Record, Simulation };

/// Seeded permutation split; fills train_indices/val_indices (disjoint,
/// exhaustive). Fraction is the training share.
void split_dataset(Dataset& dataset, double fraction, std::uint64_t seed,
                   SplitGranularity granularity = SplitGranularity::Record);

std::vector<DataRecord> gather(const Dataset& dataset, const std::vector<int>& indices);

struct YearScenario {
    int n_sims = 0;
    int n_times_per_sim = 0;
    std::string name;
};

/// Scenario 1: few added simulations, many sampled times (default 50 x 30).
YearScenario year_scenario_s1(int n_sims = 50);
/// Scenario 2: many added simulations, few sampled times (default 150 x 10).
YearScenario year_scenario_s2(int n_sims = 150);

/// Appends year-horizon records (t_end = 365) to a copy of the base set.
Dataset extend_year_dataset(const Dataset& base, const YearScenario& scenario,
                            const DataGenConfig& config, const KineticParams& kp);

/// CSV with header DF,chiF,Dc,kF,acI,t,x,y,ycut,xm,ym,xcut,u1,u2,xl,yl and a
/// companion `<path>.provenance` key-value file.
void write_dataset_csv(const Dataset& dataset, const std::string& path,
                       const std::string& config_hash = "");
Dataset read_dataset_csv(const std::string& path);

/// Displacement target at an undeformed query point of one recorded state.
std::array<double, 2> displacement_at(const TimeRecord& record, const Vec2& undeformed_xy);

}  // namespace wsim
