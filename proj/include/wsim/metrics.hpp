// Evaluation metrics for surrogate predictions: R^2, average relative RMSE,
// the rounded average relative error, error-over-time profiles, RSAW curve
// comparison, and the wall-clock speedup benchmark.

#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wsim {

using Displacement = std::array<double, 2>;

/// Per-component 1 - SSE/SST. Throws std::domain_error when a component of
/// the truth has zero variance or fewer than two samples.
std::array<double, 2> r2_components(std::span<const Displacement> truth,
                                    std::span<const Displacement> predicted);

/// Mean over the two displacement components of 1 - SSE/SST.
double r2_score(std::span<const Displacement> truth,
                std::span<const Displacement> predicted);

std::array<double, 2> arrmse_components(std::span<const Displacement> truth,
                                        std::span<const Displacement> predicted);

/// Mean over components of sqrt(SSE/SST).
double arrmse(std::span<const Displacement> truth,
              std::span<const Displacement> predicted);

/// Average relative error with both values rounded to one decimal first and
/// entries whose rounded truth is zero excluded. Throws std::domain_error
/// when a component keeps no entries.
double arelerr(std::span<const Displacement> truth,
               std::span<const Displacement> predicted);

struct ErrorProfile {
    std::vector<double> times;
    std::vector<double> mean;  // of |error|, both components pooled
    std::vector<double> std;   // population standard deviation
};

/// Mean and std of the absolute displacement error per recorded time.
ErrorProfile abs_error_profile(std::span<const double> times,
                               std::span<const Displacement> truth,
                               std::span<const Displacement> predicted);

struct RsawSummary {
    double argmin_time = 0.0;  // earliest time attaining the minimum
    double min_value = 1.0;
    double final_value = 1.0;
};

struct RsawComparison {
    RsawSummary target;
    RsawSummary predicted;
    double argmin_delta = 0.0;
    double min_delta = 0.0;
    double final_delta = 0.0;
};

/// Compares RSAW curves on an aligned time grid.
/// Throws std::invalid_argument on grid mismatch.
RsawComparison rsaw_compare(std::span<const double> times,
                            std::span<const double> target,
                            std::span<const double> predicted);

struct TimingReport {
    double simulator_seconds = 0.0;  // median over repetitions
    double surrogate_seconds = 0.0;
    double speedup = 0.0;
    int repetitions = 0;
};

/// Runs both workloads `reps` times and reports median wall-clock seconds.
TimingReport bench_speedup(const std::function<void()>& simulator,
                           const std::function<void()>& surrogate, int reps = 3);

struct EvalReport {
    double r2 = 0.0;
    double arrmse = 0.0;
    double arelerr = 0.0;
    long n_records = 0;
    ErrorProfile profile;
    bool has_rsaw = false;
    RsawComparison rsaw;
    std::vector<double> rsaw_times, rsaw_target, rsaw_predicted;
    bool has_timing = false;
    TimingReport timing;
};

/// Key-value report plus abs_error_profile.csv (t,mean,std) and, when RSAW
/// curves are present, rsaw_compare.csv (t,target,pred).
void write_eval_report(const EvalReport& report, const std::string& directory);

}  // namespace wsim
