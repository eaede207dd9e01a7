#include "wsim/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include "wsim/geometry.hpp"

namespace wsim {

namespace {

struct ComponentSums {
    double sse = 0.0;
    double sst = 0.0;
};

std::array<ComponentSums, 2> error_sums(std::span<const Displacement> truth,
                                        std::span<const Displacement> predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("metrics: truth/prediction size mismatch");
    if (truth.size() < 2)
        throw std::domain_error("metrics: need at least two samples");
    std::array<double, 2> mean{0.0, 0.0};
    for (const auto& u : truth)
        for (int k = 0; k < 2; ++k) mean[k] += u[k];
    for (int k = 0; k < 2; ++k) mean[k] /= (double)truth.size();

    std::array<ComponentSums, 2> sums;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (int k = 0; k < 2; ++k) {
            const double e = truth[i][k] - predicted[i][k];
            const double d = truth[i][k] - mean[k];
            sums[k].sse += e * e;
            sums[k].sst += d * d;
        }
    }
    for (int k = 0; k < 2; ++k)
        if (sums[k].sst == 0.0)
            throw std::domain_error("metrics: zero variance in a displacement component");
    return sums;
}

}  // namespace

std::array<double, 2> r2_components(std::span<const Displacement> truth,
                                    std::span<const Displacement> predicted) {
    const auto sums = error_sums(truth, predicted);
    return {1.0 - sums[0].sse / sums[0].sst, 1.0 - sums[1].sse / sums[1].sst};
}

double r2_score(std::span<const Displacement> truth,
                std::span<const Displacement> predicted) {
    const auto c = r2_components(truth, predicted);
    return 0.5 * (c[0] + c[1]);
}

std::array<double, 2> arrmse_components(std::span<const Displacement> truth,
                                        std::span<const Displacement> predicted) {
    const auto sums = error_sums(truth, predicted);
    return {std::sqrt(sums[0].sse / sums[0].sst), std::sqrt(sums[1].sse / sums[1].sst)};
}

double arrmse(std::span<const Displacement> truth,
              std::span<const Displacement> predicted) {
    const auto c = arrmse_components(truth, predicted);
    return 0.5 * (c[0] + c[1]);
}

double arelerr(std::span<const Displacement> truth,
               std::span<const Displacement> predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("metrics: truth/prediction size mismatch");
    double total = 0.0;
    for (int k = 0; k < 2; ++k) {
        double sum = 0.0;
        long n_kept = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const double t = round1(truth[i][k]);
            if (t == 0.0) continue;  // indicator on the rounded truth
            const double p = round1(predicted[i][k]);
            sum += std::abs((t - p) / t);
            ++n_kept;
        }
        if (n_kept == 0)
            throw std::domain_error("arelerr: no entries with nonzero rounded truth");
        total += sum / (double)n_kept;
    }
    return 0.5 * total;
}

ErrorProfile abs_error_profile(std::span<const double> times,
                               std::span<const Displacement> truth,
                               std::span<const Displacement> predicted) {
    if (times.size() != truth.size() || truth.size() != predicted.size())
        throw std::invalid_argument("abs_error_profile: size mismatch");
    std::map<double, std::vector<double>> buckets;
    for (std::size_t i = 0; i < times.size(); ++i) {
        auto& b = buckets[times[i]];
        b.push_back(std::abs(truth[i][0] - predicted[i][0]));
        b.push_back(std::abs(truth[i][1] - predicted[i][1]));
    }
    ErrorProfile profile;
    for (const auto& [t, values] : buckets) {
        if (values.empty()) {
            std::cerr << "[wsim] abs_error_profile: empty bucket at t = " << t
                      << " skipped\n";
            continue;
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= (double)values.size();
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= (double)values.size();  // population variance
        profile.times.push_back(t);
        profile.mean.push_back(mean);
        profile.std.push_back(std::sqrt(var));
    }
    return profile;
}

namespace {

RsawSummary summarize_rsaw(std::span<const double> times, std::span<const double> values) {
    RsawSummary s;
    int arg = 0;
    for (int i = 1; i < (int)values.size(); ++i)
        if (values[i] < values[arg]) arg = i;  // earliest time on ties
    s.argmin_time = times[arg];
    s.min_value = values[arg];
    s.final_value = values.back();
    return s;
}

}  // namespace

RsawComparison rsaw_compare(std::span<const double> times, std::span<const double> target,
                            std::span<const double> predicted) {
    if (times.empty() || times.size() != target.size() || times.size() != predicted.size())
        throw std::invalid_argument("rsaw_compare: time grids are not aligned");
    RsawComparison cmp;
    cmp.target = summarize_rsaw(times, target);
    cmp.predicted = summarize_rsaw(times, predicted);
    cmp.argmin_delta = cmp.predicted.argmin_time - cmp.target.argmin_time;
    cmp.min_delta = cmp.predicted.min_value - cmp.target.min_value;
    cmp.final_delta = cmp.predicted.final_value - cmp.target.final_value;
    return cmp;
}

TimingReport bench_speedup(const std::function<void()>& simulator,
                           const std::function<void()>& surrogate, int reps) {
    if (reps < 1) throw std::invalid_argument("bench_speedup: reps must be >= 1");
    auto median_seconds = [reps](const std::function<void()>& fn) {
        std::vector<double> t(reps);
        for (int r = 0; r < reps; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            fn();
            t[r] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                       .count();
        }
        std::sort(t.begin(), t.end());
        return t[reps / 2];
    };
    TimingReport report;
    report.repetitions = reps;
    report.simulator_seconds = median_seconds(simulator);
    report.surrogate_seconds = median_seconds(surrogate);
    report.speedup = report.surrogate_seconds > 0.0
                         ? report.simulator_seconds / report.surrogate_seconds
                         : 0.0;
    return report;
}

void write_eval_report(const EvalReport& report, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    {
        std::ofstream f(directory + "/report");
        char buf[64];
        auto kv = [&](const char* key, double v) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            f << key << " = " << buf << "\n";
        };
        kv("r2", report.r2);
        kv("arrmse", report.arrmse);
        kv("arelerr", report.arelerr);
        f << "n_records = " << report.n_records << "\n";
        if (report.has_rsaw) {
            kv("rsaw_target_argmin_t", report.rsaw.target.argmin_time);
            kv("rsaw_target_min", report.rsaw.target.min_value);
            kv("rsaw_target_final", report.rsaw.target.final_value);
            kv("rsaw_pred_argmin_t", report.rsaw.predicted.argmin_time);
            kv("rsaw_pred_min", report.rsaw.predicted.min_value);
            kv("rsaw_pred_final", report.rsaw.predicted.final_value);
        }
        if (report.has_timing) {
            kv("simulator_seconds", report.timing.simulator_seconds);
            kv("surrogate_seconds", report.timing.surrogate_seconds);
            kv("speedup", report.timing.speedup);
            f << "timing_repetitions = " << report.timing.repetitions << "\n";
        }
    }
    {
        std::ofstream f(directory + "/abs_error_profile.csv");
        f << "t,mean,std\n";
        char buf[128];
        for (std::size_t i = 0; i < report.profile.times.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", report.profile.times[i],
                          report.profile.mean[i], report.profile.std[i]);
            f << buf;
        }
    }
    if (report.has_rsaw && !report.rsaw_times.empty()) {
        std::ofstream f(directory + "/rsaw_compare.csv");
        f << "t,target,pred\n";
        char buf[128];
        for (std::size_t i = 0; i < report.rsaw_times.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", report.rsaw_times[i],
                          report.rsaw_target[i], report.rsaw_predicted[i]);
            f << buf;
        }
    }
}

}  // namespace wsim
