// Moving-mesh finite-element solver for the morphoelastic contraction
// model on the quarter domain: semi-implicit time stepping with mass
// lumping and FCT positivity limiting, quality-triggered global remeshing,
// and wound-boundary tracking.

#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "wsim/biomodel.hpp"
#include "wsim/geometry.hpp"
#include "wsim/mesh.hpp"
#include "wsim/params.hpp"

namespace wsim {

struct SimConfig {
    double dt = 0.1;                // days
    double t_end = 100.0;           // days
    double mesh_h = 0.0;            // cm; 0 selects auto_mesh_h
    int max_nodes = 3500;           // node budget for the auto h rule
    double remesh_threshold = 0.5;  // remesh when quality < threshold * quality at build
    enum class Limiter { Fct, Clip };
    Limiter limiter = Limiter::Fct;
    enum class Solver { Iterative, Direct };
    Solver solver = Solver::Iterative;
    double solver_tol = 1e-8;       // relative residual for linear solves
    double record_every = 1.0;      // days between recorded states
    bool unwounded = false;         // equilibrium fields everywhere (no wound)
    bool quasi_static = false;      // drop the inertial term
    double traction_scale = 1.0;    // multiplies xi; 0 switches the load off

    void validate() const;
};

/// Nodal fields on the current triangulation. Velocity and displacement are
/// interleaved (x0, y0, x1, y1, ...); the strain tensor is stored by its
/// three independent components.
struct NodalFields {
    Eigen::VectorXd N, M, c, rho;
    Eigen::VectorXd v, u;
    Eigen::VectorXd e11, e22, e12;

    void resize_zero(int n_nodes);
};

struct SimState {
    Mesh mesh;
    NodalFields f;
    double time = 0.0;
    double quality_ref = 1.0;  // mesh quality right after the last (re)mesh
};

struct TimeRecord {
    double t = 0.0;
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    Eigen::VectorXd u;  // 2n, interleaved
    Eigen::VectorXd N, M, c, rho;
    std::vector<Vec2> rim;  // deformed rim polyline
    double rsaw = 1.0;

    /// Node positions pulled back by the accumulated displacement.
    std::vector<Vec2> undeformed_nodes() const;
};

struct SimResult {
    WoundGeometry geometry;
    KineticParams kinetic;
    VariableParams variable;
    SimConfig config;
    double mesh_h = 0.0;
    std::vector<TimeRecord> records;
    int remesh_count = 0;
    double wall_seconds = 0.0;

    std::vector<double> times() const;
    std::vector<double> rsaw_series() const;
};

/// Target element size balancing rim resolution against the node budget.
double auto_mesh_h(const WoundGeometry& geometry, int max_nodes);

/// Sine-transition initial fields: equilibrium outside the wound, wound
/// values deeper than the transition width s_w inside it.
NodalFields initial_conditions(const Mesh& mesh, const WoundGeometry& geometry,
                               const KineticParams& kp);

/// Equilibrium fields everywhere (unwounded run).
NodalFields equilibrium_fields(const Mesh& mesh, const KineticParams& kp);

/// Transition width s_w = min(0.2 * min(x_cut, y_cut), 0.5 cm).
double transition_width(const WoundGeometry& geometry);

/// One semi-implicit step: chemistry (FCT-limited), momentum solve, strain
/// update, mesh motion. Throws on solver failure.
void step(SimState& state, double dt, const VariableParams& vp,
          const KineticParams& kp, const SimConfig& config);

/// Regenerate the triangulation on the current domain and rim, transferring
/// all nodal fields by P1 interpolation.
void remesh(SimState& state, double h);

SimResult run_simulation(const SimConfig& config, const WoundGeometry& geometry,
                         const VariableParams& vp, const KineticParams& kp);

struct BoundaryTrace {
    std::vector<double> times;
    std::vector<double> rsaw;
    std::vector<std::vector<Vec2>> rims;
    double argmin_time = 0.0;  // earliest time attaining the minimum
    double min_value = 1.0;
    double final_value = 1.0;
};

BoundaryTrace wound_boundary_trace(const SimResult& result);

/// Persist a result as a directory: `meta`, `params`, per-time
/// `t_<days>.csv` (x,y,u1,u2,N,M,c,rho) and `rsaw.csv` (t,rsaw).
void save_result(const SimResult& result, const std::string& directory);

}  // namespace wsim
