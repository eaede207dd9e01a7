#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "wsim/datapipe.hpp"
#include "wsim/fem.hpp"

using namespace wsim;

namespace {

SimConfig quick_config(double t_end, double dt = 0.1) {
    SimConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.record_every = 1.0;
    cfg.max_nodes = 900;
    return cfg;
}

const WoundGeometry kDefaultWound{WoundKind::Rectangle, 0.3, 0.15};

}  // namespace

TEST_SUITE_BEGIN("fem");

TEST_CASE("initial conditions follow the sine transition") {
    const WoundGeometry geom{WoundKind::Rectangle, 2.0, 1.0};
    const KineticParams kp;
    const Mesh mesh = generate_mesh(geom, 0.2);
    const NodalFields f = initial_conditions(mesh, geom, kp);
    const double s_w = transition_width(geom);
    CHECK(s_w == doctest::Approx(0.2));

    BoundaryCurve rim;
    rim.points = mesh.rim_polyline();
    rim.s.resize(rim.points.size(), 0.0);

    int n_outside = 0, n_core = 0, n_rim = 0;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const auto rd = wound_distance(mesh.nodes[i], rim);
        if (!rd.inside) {
            ++n_outside;
            CHECK(f.N[i] == kp.N_bar);
            CHECK(f.c[i] == kp.c_bar);
            CHECK(f.rho[i] == kp.rho_bar);
        } else if (rd.distance >= s_w) {
            ++n_core;
            CHECK(f.N[i] == doctest::Approx(kp.N_tilde));
            CHECK(f.c[i] == doctest::Approx(kp.c_tilde));
            CHECK(f.rho[i] == doctest::Approx(kp.rho_tilde));
        } else if (rd.distance == 0.0) {
            ++n_rim;
            CHECK(f.N[i] == kp.N_bar);  // sin(0) = 0: transition starts at bar
        }
        CHECK(f.M[i] == 0.0);
    }
    CHECK(n_outside > 0);
    CHECK(n_core > 0);
    CHECK(n_rim > 0);
    CHECK(f.v.norm() == 0.0);
    CHECK(f.u.norm() == 0.0);
    CHECK(f.e11.norm() == 0.0);
}

TEST_CASE("unwounded run preserves the equilibrium") {
    KineticParams kp;
    VariableParams vp;
    SimConfig cfg = quick_config(5.0);
    cfg.unwounded = true;
    const WoundGeometry geom{WoundKind::Rectangle, 1.0, 1.0};
    const SimResult res = run_simulation(cfg, geom, vp, kp);

    const TimeRecord& last = res.records.back();
    CHECK(last.t == doctest::Approx(5.0));
    double drift = 0.0;
    for (int i = 0; i < last.N.size(); ++i) {
        drift = std::max(drift, std::abs(last.N[i] - kp.N_bar) / kp.N_bar);
        drift = std::max(drift, std::abs(last.rho[i] - kp.rho_bar) / kp.rho_bar);
        drift = std::max(drift, std::abs(last.M[i]) / kp.N_bar);
        drift = std::max(drift, std::abs(last.c[i]) / 1e-8);
    }
    INFO("max relative drift " << drift);
    CHECK(drift < 1e-3);
    CHECK(last.u.cwiseAbs().maxCoeff() < 1e-6);
    CHECK(res.records.back().rsaw == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero traction keeps the mesh still") {
    KineticParams kp;
    VariableParams vp;
    SimConfig cfg = quick_config(2.0);
    cfg.traction_scale = 0.0;
    const SimResult res = run_simulation(cfg, kDefaultWound, vp, kp);
    for (const auto& rec : res.records) {
        CHECK(rec.u.cwiseAbs().maxCoeff() == 0.0);
        CHECK(rec.rsaw == 1.0);
    }
}

TEST_CASE("wounded run: positivity, symmetry storage, boundary compliance") {
    KineticParams kp;
    VariableParams vp;

    for (const auto limiter : {SimConfig::Limiter::Fct, SimConfig::Limiter::Clip}) {
        SimConfig cfg = quick_config(3.0);
        cfg.limiter = limiter;
        cfg.record_every = cfg.dt;  // audit every step

        const SimResult res = run_simulation(cfg, kDefaultWound, vp, kp);
        double min_field = 0.0;
        for (const auto& rec : res.records) {
            min_field = std::min({min_field, rec.N.minCoeff(), rec.M.minCoeff(),
                                  rec.c.minCoeff(), rec.rho.minCoeff()});
        }
        CHECK(min_field >= 0.0);
        CHECK(res.records.back().rsaw < 1.0);
    }

    // Boundary compliance via one explicit step.
    SimConfig cfg = quick_config(1.0);
    const double h = auto_mesh_h(kDefaultWound, cfg.max_nodes);
    SimState state;
    state.mesh = generate_mesh(kDefaultWound, h);
    state.f = initial_conditions(state.mesh, kDefaultWound, kp);
    state.quality_ref = state.mesh.quality_at_build;
    for (int k = 0; k < 5; ++k) step(state, cfg.dt, vp, kp, cfg);
    for (int i = 0; i < state.mesh.n_nodes(); ++i) {
        if (state.mesh.is_outer(i)) {
            CHECK(state.f.v[2 * i] == 0.0);
            CHECK(state.f.v[2 * i + 1] == 0.0);
        } else if (state.mesh.tags[i] & TagLeft) {
            CHECK(state.f.v[2 * i] == 0.0);  // v.n on the vertical symmetry axis
        } else if (state.mesh.tags[i] & TagBottom) {
            CHECK(state.f.v[2 * i + 1] == 0.0);
        }
    }
    // The strain tensor is stored symmetric; reconstruction is exact.
    for (int i = 0; i < state.mesh.n_nodes(); ++i) {
        Mat2 eps;
        eps << state.f.e11[i], state.f.e12[i], state.f.e12[i], state.f.e22[i];
        CHECK(std::abs(eps(0, 1) - eps(1, 0)) <= 1e-10);
    }
}

TEST_CASE("contraction then retraction signature") {
    KineticParams kp;
    VariableParams vp;
    SimConfig cfg = quick_config(20.0);
    const SimResult res = run_simulation(cfg, kDefaultWound, vp, kp);

    CHECK(res.records.front().rsaw == 1.0);
    const BoundaryTrace trace = wound_boundary_trace(res);
    CHECK(trace.min_value < trace.final_value);
    CHECK(trace.final_value < 1.0);
    CHECK(trace.argmin_time < cfg.t_end);
    INFO("argmin " << trace.argmin_time << " min " << trace.min_value << " final "
                   << trace.final_value);
    CHECK(trace.final_value - trace.min_value >= 1e-3);
    CHECK(1.0 - trace.final_value >= 1e-3);
}

TEST_CASE("boundary trace on synthetic records") {
    SimResult res;
    TimeRecord rec;
    rec.t = 0.0;
    rec.rim = {Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
    rec.rsaw = 1.0;
    res.records.push_back(rec);
    rec.t = 10.0;
    for (auto& p : rec.rim) p *= 0.9;
    rec.rsaw = 0.81;
    res.records.push_back(rec);
    rec.t = 20.0;
    rec.rsaw = 0.81;  // duplicate minimum: argmin stays at the earlier time
    res.records.push_back(rec);

    const BoundaryTrace trace = wound_boundary_trace(res);
    CHECK(trace.rsaw[1] == doctest::Approx(0.81));
    CHECK(trace.argmin_time == 10.0);
    CHECK(trace.min_value == doctest::Approx(0.81));
}

TEST_CASE("remesh transfers fields") {
    KineticParams kp;
    const WoundGeometry geom{WoundKind::Ellipse, 1.0, 0.8};
    const double h = 0.12;

    SimState state;
    state.mesh = generate_mesh(geom, h);
    state.f = initial_conditions(state.mesh, geom, kp);
    state.quality_ref = state.mesh.quality_at_build;

    SUBCASE("a linear field survives an undeformed remesh exactly") {
        for (int i = 0; i < state.mesh.n_nodes(); ++i) {
            const Vec2& p = state.mesh.nodes[i];
            state.f.N[i] = 2.0 + 3.0 * p.x() - 1.5 * p.y();
            state.f.u[2 * i] = 0.1 * p.x();
            state.f.u[2 * i + 1] = -0.05 * p.y();
        }
        remesh(state, h);
        for (int i = 0; i < state.mesh.n_nodes(); ++i) {
            const Vec2& p = state.mesh.nodes[i];
            CHECK(state.f.N[i]
                  == doctest::Approx(2.0 + 3.0 * p.x() - 1.5 * p.y()).epsilon(1e-9));
            CHECK(state.f.u[2 * i] == doctest::Approx(0.1 * p.x()).epsilon(1e-9));
        }
    }

    SUBCASE("forced remesh after distortion restores quality") {
        // Pull interior nodes toward the origin to degrade element quality.
        for (int i = 0; i < state.mesh.n_nodes(); ++i) {
            if (state.mesh.tags[i] != 0) continue;
            bool is_rim = false;
            for (int r : state.mesh.rim) is_rim |= (r == i);
            if (is_rim) continue;
            state.mesh.nodes[i] *= 0.9;
        }
        const double q_before = mesh_quality(state.mesh);
        remesh(state, h);
        const double q_after = mesh_quality(state.mesh);
        CHECK(q_after >= q_before);
        CHECK(q_after > 0.25);
    }
}

TEST_CASE("remesh triggers during a long contraction") {
    KineticParams kp;
    VariableParams vp;
    SimConfig cfg = quick_config(40.0);
    cfg.max_nodes = 500;
    const WoundGeometry geom{WoundKind::Rectangle, 0.4, 0.3};
    const SimResult res = run_simulation(cfg, geom, vp, kp);
    INFO("remesh count " << res.remesh_count);
    CHECK(res.records.back().rsaw < 0.95);
    // Quality stayed above the failure floor throughout (run completed).
    CHECK(res.records.size() == 41);
}

TEST_CASE("dt refinement shows a first-order trend") {
    KineticParams kp;
    VariableParams vp;
    SimConfig base = quick_config(10.0);
    base.mesh_h = 0.06;
    base.remesh_threshold = 1e-9;  // freeze the mesh topology

    double prev = 0.0, prev_change = 0.0;
    bool have_prev = false, have_change = false;
    for (const double dt : {0.4, 0.2, 0.1}) {
        SimConfig cfg = base;
        cfg.dt = dt;
        const SimResult res = run_simulation(cfg, kDefaultWound, vp, kp);
        const double r = res.records.back().rsaw;
        if (have_prev) {
            const double change = std::abs(r - prev);
            if (have_change) CHECK(change < 2.0 * prev_change);
            prev_change = change;
            have_change = true;
        }
        prev = r;
        have_prev = true;
    }
}

TEST_CASE("determinism: identical runs match bitwise") {
    KineticParams kp;
    VariableParams vp;
    SimConfig cfg = quick_config(2.0);
    const SimResult a = run_simulation(cfg, kDefaultWound, vp, kp);
    const SimResult b = run_simulation(cfg, kDefaultWound, vp, kp);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t r = 0; r < a.records.size(); ++r) {
        CHECK(a.records[r].rsaw == b.records[r].rsaw);
        REQUIRE(a.records[r].u.size() == b.records[r].u.size());
        CHECK((a.records[r].u - b.records[r].u).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.records[r].N - b.records[r].N).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("result persistence layout") {
    KineticParams kp;
    VariableParams vp;
    SimConfig cfg = quick_config(2.0);
    const SimResult res = run_simulation(cfg, kDefaultWound, vp, kp);

    const std::string dir = "fem_result_test";
    save_result(res, dir);

    std::ifstream rsaw(dir + "/rsaw.csv");
    REQUIRE(rsaw.good());
    std::string line;
    std::getline(rsaw, line);
    CHECK(line == "t,rsaw");
    std::getline(rsaw, line);
    CHECK(line == "0,1.0");

    std::ifstream t0(dir + "/t_0.csv");
    REQUIRE(t0.good());
    std::getline(t0, line);
    CHECK(line == "x,y,u1,u2,N,M,c,rho");

    CHECK(std::filesystem::exists(dir + "/meta"));
    CHECK(std::filesystem::exists(dir + "/params"));
    CHECK(std::filesystem::exists(dir + "/t_2.csv"));
    std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
