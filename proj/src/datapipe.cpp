#include "wsim/datapipe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wsim {

void DataGenConfig::validate() const {
    if (n_sims < 1) throw std::invalid_argument("DataGenConfig: n_sims must be >= 1");
    if (n_time_draws < 1 || n_space_draws < 1)
        throw std::invalid_argument("DataGenConfig: draw counts must be >= 1");
    if (jobs < 1) throw std::invalid_argument("DataGenConfig: jobs must be >= 1");
    sim.validate();
}

std::array<double, 2> displacement_at(const TimeRecord& record, const Vec2& p) {
    const std::vector<Vec2> undeformed = record.undeformed_nodes();
    const MeshLocator locator(undeformed, record.triangles);
    const auto loc = locator.locate(p);
    if (loc.tri < 0) throw std::runtime_error("displacement_at: empty record");
    const auto& t = record.triangles[loc.tri];
    std::array<double, 2> u{};
    for (int k = 0; k < 2; ++k)
        u[k] = loc.bary[0] * record.u[2 * t[0] + k] + loc.bary[1] * record.u[2 * t[1] + k]
               + loc.bary[2] * record.u[2 * t[2] + k];
    return u;
}

namespace {

// Cuts below 0.02 cm would round to a zero domain extent; resample inside
// the open interval.
double sample_cut(Rng& rng) {
    double c;
    do {
        c = rng.uniform(0.0, 5.0);
    } while (c < 0.02);
    return c;
}

std::vector<int> sample_time_indices(Rng& rng, int n_available, int n_draws) {
    std::vector<int> idx(n_available);
    for (int i = 0; i < n_available; ++i) idx[i] = i;
    const int take = std::min(n_draws, n_available);
    // Partial Fisher-Yates, then ascending order for readable datasets.
    for (int i = 0; i < take; ++i)
        std::swap(idx[i], idx[i + (int)rng.uniform_index(n_available - i)]);
    idx.resize(take);
    std::sort(idx.begin(), idx.end());
    return idx;
}

struct SimJob {
    std::vector<DataRecord> records;
    SimProvenance provenance;
    bool failed = false;
    std::string error;
};

void append_sampled_records(const SimResult& result, const VariableParams& vp,
                            const WoundGeometry& geometry, Rng& rng, int n_time_draws,
                            int n_space_draws, std::vector<DataRecord>& out) {
    const Vec2 ext = domain_extent(geometry);
    const auto quad = shape_quadruple(geometry);
    const auto times = sample_time_indices(rng, (int)result.records.size(), n_time_draws);
    for (int ti : times) {
        const TimeRecord& rec = result.records[ti];
        const std::vector<Vec2> undeformed = rec.undeformed_nodes();
        const MeshLocator locator(undeformed, rec.triangles);
        for (int s = 0; s < n_space_draws; ++s) {
            const Vec2 p(rng.uniform(0.0, ext.x()), rng.uniform(0.0, ext.y()));
            const auto loc = locator.locate(p);
            const auto& t = rec.triangles[loc.tri];
            DataRecord r;
            r.branch = vp.as_array();
            r.trunk = {rec.t, p.x(), p.y(), quad[0], quad[1], quad[2], quad[3]};
            for (int k = 0; k < 2; ++k)
                r.target[k] = loc.bary[0] * rec.u[2 * t[0] + k]
                              + loc.bary[1] * rec.u[2 * t[1] + k]
                              + loc.bary[2] * rec.u[2 * t[2] + k];
            r.extent = {ext.x(), ext.y()};
            out.push_back(r);
        }
    }
}

void append_full_records(const SimResult& result, const VariableParams& vp,
                         const WoundGeometry& geometry, std::vector<DataRecord>& out) {
    const Vec2 ext = domain_extent(geometry);
    const auto quad = shape_quadruple(geometry);
    for (const TimeRecord& rec : result.records) {
        const std::vector<Vec2> undeformed = rec.undeformed_nodes();
        for (std::size_t i = 0; i < undeformed.size(); ++i) {
            DataRecord r;
            r.branch = vp.as_array();
            const double x = std::clamp(undeformed[i].x(), 0.0, ext.x());
            const double y = std::clamp(undeformed[i].y(), 0.0, ext.y());
            r.trunk = {rec.t, x, y, quad[0], quad[1], quad[2], quad[3]};
            r.target = {rec.u[2 * i], rec.u[2 * i + 1]};
            r.extent = {ext.x(), ext.y()};
            out.push_back(r);
        }
    }
}

/// Runs jobs 0..n-1 with stable output order and an optional thread pool.
template <typename Fn>
std::vector<SimJob> run_jobs(int n, int jobs, Fn&& body) {
    std::vector<SimJob> slots(n);
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) body(i, slots[i]);
        return slots;
    }
    std::mutex mtx;
    int next = 0;
    auto worker = [&] {
        for (;;) {
            int i;
            {
                std::lock_guard<std::mutex> lock(mtx);
                if (next >= n) return;
                i = next++;
            }
            body(i, slots[i]);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(jobs, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return slots;
}

Dataset assemble(std::vector<SimJob>&& slots, std::uint64_t seed, std::string scenario) {
    Dataset ds;
    ds.seed = seed;
    ds.scenario = std::move(scenario);
    int failures = 0;
    for (auto& job : slots) {
        if (job.failed) {
            ++failures;
            std::cerr << "[wsim] simulation " << job.provenance.sim_index
                      << " skipped: " << job.error << "\n";
            continue;
        }
        job.provenance.n_records = (int)job.records.size();
        ds.provenance.push_back(job.provenance);
        ds.records.insert(ds.records.end(), job.records.begin(), job.records.end());
    }
    if (failures > 0)
        std::cerr << "[wsim] " << failures << " of " << slots.size()
                  << " simulations failed and were skipped\n";
    return ds;
}

}  // namespace

Dataset generate_training_set(const DataGenConfig& config, const KineticParams& kp) {
    config.validate();
    auto slots = run_jobs(config.n_sims, config.jobs, [&](int i, SimJob& job) {
        job.provenance.sim_index = i;
        try {
            Rng rng = Rng::derive(config.seed, (std::uint64_t)i);
            const WoundKind kinds[3] = {WoundKind::Rectangle, WoundKind::Rhombus,
                                        WoundKind::Ellipse};
            WoundGeometry geom;
            geom.kind = kinds[rng.uniform_index(3)];
            geom.x_cut = sample_cut(rng);
            geom.y_cut = sample_cut(rng);
            const VariableParams vp = sample_variable_params(rng);
            job.provenance.geometry = geom;
            job.provenance.params = vp;
            const SimResult result = run_simulation(config.sim, geom, vp, kp);
            append_sampled_records(result, vp, geom, rng, config.n_time_draws,
                                   config.n_space_draws, job.records);
        } catch (const std::exception& err) {
            job.failed = true;
            job.error = err.what();
        }
    });
    return assemble(std::move(slots), config.seed, "train");
}

Dataset generate_convex_test_set(const DataGenConfig& config, const KineticParams& kp) {
    config.validate();
    auto slots = run_jobs(config.n_sims, config.jobs, [&](int i, SimJob& job) {
        job.provenance.sim_index = i;
        try {
            Rng rng = Rng::derive(config.seed, (std::uint64_t)i);
            WoundGeometry geom;
            geom.kind = WoundKind::Convex;
            geom.x_cut = sample_cut(rng);
            geom.y_cut = sample_cut(rng);
            double sum = 0.0;
            for (double& w : geom.weights) {
                w = rng.uniform();
                sum += w;
            }
            for (double& w : geom.weights) w /= sum;
            geom.weights[2] = 1.0 - geom.weights[0] - geom.weights[1];
            const VariableParams vp = sample_variable_params(rng);
            job.provenance.geometry = geom;
            job.provenance.params = vp;
            const SimResult result = run_simulation(config.sim, geom, vp, kp);
            append_full_records(result, vp, geom, job.records);
        } catch (const std::exception& err) {
            job.failed = true;
            job.error = err.what();
        }
    });
    return assemble(std::move(slots), config.seed, "convex");
}

void split_dataset(Dataset& ds, double fraction, std::uint64_t seed,
                   SplitGranularity granularity) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split_dataset: fraction must lie in (0,1)");
    ds.train_indices.clear();
    ds.val_indices.clear();
    Rng rng = Rng::derive(seed, 0x5b17);

    if (granularity == SplitGranularity::Record) {
        std::vector<int> order((int)ds.records.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        const std::size_t n_train = (std::size_t)std::llround(fraction * order.size());
        ds.train_indices.assign(order.begin(), order.begin() + n_train);
        ds.val_indices.assign(order.begin() + n_train, order.end());
    } else {
        std::vector<int> sims((int)ds.provenance.size());
        for (std::size_t i = 0; i < sims.size(); ++i) sims[i] = (int)i;
        for (std::size_t i = sims.size(); i > 1; --i)
            std::swap(sims[i - 1], sims[rng.uniform_index(i)]);
        const std::size_t n_train = (std::size_t)std::llround(fraction * sims.size());
        std::vector<int> offsets(ds.provenance.size() + 1, 0);
        for (std::size_t s = 0; s < ds.provenance.size(); ++s)
            offsets[s + 1] = offsets[s] + ds.provenance[s].n_records;
        for (std::size_t k = 0; k < sims.size(); ++k) {
            auto& target = k < n_train ? ds.train_indices : ds.val_indices;
            for (int r = offsets[sims[k]]; r < offsets[sims[k] + 1]; ++r)
                target.push_back(r);
        }
    }
    std::sort(ds.train_indices.begin(), ds.train_indices.end());
    std::sort(ds.val_indices.begin(), ds.val_indices.end());
}

std::vector<DataRecord> gather(const Dataset& ds, const std::vector<int>& indices) {
    std::vector<DataRecord> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(ds.records.at(i));
    return out;
}

YearScenario year_scenario_s1(int n_sims) { return {n_sims, 30, "year-s1"}; }
YearScenario year_scenario_s2(int n_sims) { return {n_sims, 10, "year-s2"}; }

Dataset extend_year_dataset(const Dataset& base, const YearScenario& scenario,
                            const DataGenConfig& config, const KineticParams& kp) {
    if (scenario.n_sims < 1 || scenario.n_times_per_sim < 1)
        throw std::invalid_argument("extend_year_dataset: empty scenario");
    DataGenConfig year_cfg = config;
    year_cfg.n_sims = scenario.n_sims;
    year_cfg.n_time_draws = scenario.n_times_per_sim;
    year_cfg.sim.t_end = 365.0;
    year_cfg.validate();

    auto slots = run_jobs(year_cfg.n_sims, year_cfg.jobs, [&](int i, SimJob& job) {
        job.provenance.sim_index = i;
        try {
            // Distinct stream family so year runs never alias the base set.
            Rng rng = Rng::derive(config.seed, 0x10000000ULL + (std::uint64_t)i);
            const WoundKind kinds[3] = {WoundKind::Rectangle, WoundKind::Rhombus,
                                        WoundKind::Ellipse};
            WoundGeometry geom;
            geom.kind = kinds[rng.uniform_index(3)];
            geom.x_cut = sample_cut(rng);
            geom.y_cut = sample_cut(rng);
            const VariableParams vp = sample_variable_params(rng);
            job.provenance.geometry = geom;
            job.provenance.params = vp;
            const SimResult result = run_simulation(year_cfg.sim, geom, vp, kp);
            append_sampled_records(result, vp, geom, rng, year_cfg.n_time_draws,
                                   year_cfg.n_space_draws, job.records);
        } catch (const std::exception& err) {
            job.failed = true;
            job.error = err.what();
        }
    });
    Dataset added = assemble(std::move(slots), config.seed, scenario.name);

    Dataset out = base;
    out.scenario = scenario.name;
    out.train_indices.clear();
    out.val_indices.clear();
    for (auto& prov : added.provenance) {
        prov.sim_index += (int)out.provenance.size();
        out.provenance.push_back(prov);
    }
    out.records.insert(out.records.end(), added.records.begin(), added.records.end());
    return out;
}

// ---------------------------------------------------------------------------
// CSV persistence
// ---------------------------------------------------------------------------

static const char* kCsvHeader = "DF,chiF,Dc,kF,acI,t,x,y,ycut,xm,ym,xcut,u1,u2,xl,yl";

void write_dataset_csv(const Dataset& ds, const std::string& path,
                       const std::string& config_hash) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << kCsvHeader << "\n";
    char buf[640];
    for (const DataRecord& r : ds.records) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.branch[0], r.branch[1], r.branch[2], r.branch[3], r.branch[4],
                      r.trunk[0], r.trunk[1], r.trunk[2], r.trunk[3], r.trunk[4],
                      r.trunk[5], r.trunk[6], r.target[0], r.target[1], r.extent[0],
                      r.extent[1]);
        f << buf;
    }

    std::ofstream prov(path + ".provenance");
    prov << "seed = " << ds.seed << "\n"
         << "scenario = " << ds.scenario << "\n"
         << "n_sims = " << ds.provenance.size() << "\n"
         << "n_records = " << ds.records.size() << "\n";
    if (!config_hash.empty()) prov << "config_hash = " << config_hash << "\n";
    for (const auto& p : ds.provenance) {
        prov << "sim_" << p.sim_index << " = " << to_string(p.geometry.kind) << " "
             << p.geometry.x_cut << " " << p.geometry.y_cut;
        if (p.geometry.kind == WoundKind::Convex)
            prov << " w " << p.geometry.weights[0] << " " << p.geometry.weights[1] << " "
                 << p.geometry.weights[2];
        prov << " records " << p.n_records << "\n";
    }
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line != kCsvHeader)
        throw std::runtime_error("dataset csv: unexpected header in " + path);
    Dataset ds;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        DataRecord r;
        double* fields[16] = {&r.branch[0], &r.branch[1], &r.branch[2], &r.branch[3],
                              &r.branch[4], &r.trunk[0],  &r.trunk[1],  &r.trunk[2],
                              &r.trunk[3],  &r.trunk[4],  &r.trunk[5],  &r.trunk[6],
                              &r.target[0], &r.target[1], &r.extent[0], &r.extent[1]};
        std::stringstream ss(line);
        std::string cell;
        for (int k = 0; k < 16; ++k) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("dataset csv: short row in " + path);
            *fields[k] = std::stod(cell);
        }
        ds.records.push_back(r);
    }
    return ds;
}

}  // namespace wsim
