#include "wsim/fem.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <stdexcept>

namespace wsim {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
    if (!(t_end >= dt)) throw std::invalid_argument("SimConfig: t_end must be at least dt");
    if (!(remesh_threshold > 0.0 && remesh_threshold <= 1.0))
        throw std::invalid_argument("SimConfig: remesh threshold must lie in (0,1]");
    if (!(solver_tol > 0.0)) throw std::invalid_argument("SimConfig: solver_tol must be positive");
    if (!(record_every > 0.0)) throw std::invalid_argument("SimConfig: record_every must be positive");
    if (mesh_h < 0.0) throw std::invalid_argument("SimConfig: mesh_h must be non-negative");
    if (max_nodes < 16) throw std::invalid_argument("SimConfig: max_nodes too small");
}

void NodalFields::resize_zero(int n) {
    N = Eigen::VectorXd::Zero(n);
    M = Eigen::VectorXd::Zero(n);
    c = Eigen::VectorXd::Zero(n);
    rho = Eigen::VectorXd::Zero(n);
    v = Eigen::VectorXd::Zero(2 * n);
    u = Eigen::VectorXd::Zero(2 * n);
    e11 = Eigen::VectorXd::Zero(n);
    e22 = Eigen::VectorXd::Zero(n);
    e12 = Eigen::VectorXd::Zero(n);
}

std::vector<Vec2> TimeRecord::undeformed_nodes() const {
    std::vector<Vec2> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        out[i] = nodes[i] - Vec2(u[2 * i], u[2 * i + 1]);
    return out;
}

std::vector<double> SimResult::times() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.t);
    return out;
}

std::vector<double> SimResult::rsaw_series() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.rsaw);
    return out;
}

double auto_mesh_h(const WoundGeometry& geometry, int max_nodes) {
    const Vec2 ext = domain_extent(geometry);
    const double min_cut = std::min(geometry.x_cut, geometry.y_cut);
    // Hexagonal packing puts ~area/(0.866 h^2) nodes in the domain.
    const double h_budget = std::sqrt(ext.x() * ext.y() / (0.866 * max_nodes));
    const double h = std::max(min_cut / 4.0, h_budget);
    return std::min(h, 0.9 * min_cut);
}

double transition_width(const WoundGeometry& geometry) {
    return std::min(0.2 * std::min(geometry.x_cut, geometry.y_cut), 0.5);
}

NodalFields equilibrium_fields(const Mesh& mesh, const KineticParams& kp) {
    NodalFields f;
    f.resize_zero(mesh.n_nodes());
    f.N.setConstant(kp.N_bar);
    f.M.setConstant(kp.M_bar);
    f.c.setConstant(kp.c_bar);
    f.rho.setConstant(kp.rho_bar);
    return f;
}

NodalFields initial_conditions(const Mesh& mesh, const WoundGeometry& geometry,
                               const KineticParams& kp) {
    NodalFields f = equilibrium_fields(mesh, kp);
    const double s_w = transition_width(geometry);

    BoundaryCurve rim;
    rim.points = mesh.rim_polyline();
    rim.s.resize(rim.points.size(), 0.0);

    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const RimDistance rd = wound_distance(mesh.nodes[i], rim);
        if (!rd.inside) continue;
        const double ramp = std::sin(0.5 * std::numbers::pi * std::min(rd.distance, s_w) / s_w);
        f.N[i] = kp.N_bar + (kp.N_tilde - kp.N_bar) * ramp;
        f.c[i] = kp.c_bar + (kp.c_tilde - kp.c_bar) * ramp;
        f.rho[i] = kp.rho_bar + (kp.rho_tilde - kp.rho_bar) * ramp;
    }
    return f;
}

// ---------------------------------------------------------------------------
// Per-step element quantities
// ---------------------------------------------------------------------------

namespace {

struct ElementCache {
    std::vector<double> area;
    std::vector<std::array<Vec2, 3>> grad;  // P1 basis gradients, per vertex
    Eigen::VectorXd lumped_mass;
    std::vector<std::pair<int, int>> edges;  // unique node pairs (i < j)

    explicit ElementCache(const Mesh& mesh) {
        const int ne = mesh.n_triangles();
        area.resize(ne);
        grad.resize(ne);
        lumped_mass = Eigen::VectorXd::Zero(mesh.n_nodes());
        std::set<std::pair<int, int>> edge_set;
        for (int e = 0; e < ne; ++e) {
            const auto& t = mesh.triangles[e];
            const Vec2& a = mesh.nodes[t[0]];
            const Vec2& b = mesh.nodes[t[1]];
            const Vec2& c = mesh.nodes[t[2]];
            const double A = triangle_area(a, b, c);
            if (!(A > 0.0)) throw std::runtime_error("fem: non-positive element area");
            area[e] = A;
            const double inv2A = 1.0 / (2.0 * A);
            grad[e][0] = Vec2(b.y() - c.y(), c.x() - b.x()) * inv2A;
            grad[e][1] = Vec2(c.y() - a.y(), a.x() - c.x()) * inv2A;
            grad[e][2] = Vec2(a.y() - b.y(), b.x() - a.x()) * inv2A;
            for (int k = 0; k < 3; ++k) {
                lumped_mass[t[k]] += A / 3.0;
                const int i = t[k], j = t[(k + 1) % 3];
                edge_set.emplace(std::min(i, j), std::max(i, j));
            }
        }
        edges.assign(edge_set.begin(), edge_set.end());
    }
};

/// Area-weighted nodal recovery of the velocity gradient L_ij = dv_i/dx_j.
std::vector<Mat2> recover_velocity_gradient(const Mesh& mesh, const ElementCache& ec,
                                            const Eigen::VectorXd& v) {
    std::vector<Mat2> L(mesh.n_nodes(), Mat2::Zero());
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(mesh.n_nodes());
    for (int e = 0; e < mesh.n_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        Mat2 Le = Mat2::Zero();
        for (int k = 0; k < 3; ++k) {
            const Vec2 g = ec.grad[e][k];
            Le.row(0) += v[2 * t[k]] * g.transpose();
            Le.row(1) += v[2 * t[k] + 1] * g.transpose();
        }
        for (int k = 0; k < 3; ++k) {
            L[t[k]] += ec.area[e] * Le;
            weight[t[k]] += ec.area[e];
        }
    }
    for (int i = 0; i < mesh.n_nodes(); ++i)
        if (weight[i] > 0.0) L[i] /= weight[i];
    return L;
}

struct SpeciesProblem {
    std::vector<double> D_elem;   // diffusion coefficient per element
    std::vector<Vec2> w_elem;     // advective (chemotaxis) velocity per element
    Eigen::VectorXd sink;         // implicit sink rate per node, >= 0
    Eigen::VectorXd source;       // explicit source rate per node, >= 0
    double dirichlet = 0.0;       // value on the outer boundary
};

Eigen::VectorXd solve_sparse(const SpMat& S, const Eigen::VectorXd& rhs,
                             const Eigen::VectorXd& guess, SimConfig::Solver solver,
                             double tol, bool symmetric, const char* what) {
    if (solver == SimConfig::Solver::Direct) {
        Eigen::SparseLU<SpMat> lu(S);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error(std::string("fem: factorization failed in ") + what);
        return lu.solve(rhs);
    }
    if (symmetric) {
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(tol);
        cg.setMaxIterations(20000);
        cg.compute(S);
        Eigen::VectorXd x = cg.solveWithGuess(rhs, guess);
        if (cg.info() != Eigen::Success) {
            Eigen::SparseLU<SpMat> lu(S);
            if (lu.info() != Eigen::Success)
                throw std::runtime_error(std::string("fem: solver failed in ") + what);
            x = lu.solve(rhs);
        }
        return x;
    }
    Eigen::BiCGSTAB<SpMat> bicg;
    bicg.setTolerance(tol);
    bicg.setMaxIterations(20000);
    bicg.compute(S);
    Eigen::VectorXd x = bicg.solveWithGuess(rhs, guess);
    if (bicg.info() != Eigen::Success) {
        Eigen::SparseLU<SpMat> lu(S);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error(std::string("fem: solver failed in ") + what);
        x = lu.solve(rhs);
    }
    return x;
}

void clamp_tiny_negatives(Eigen::VectorXd& z, const char* what) {
    const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
    const double floor = -1e-9 * scale;
    for (int i = 0; i < z.size(); ++i) {
        if (z[i] < 0.0) {
            if (z[i] < floor)
                throw std::runtime_error(std::string("fem: negative value after limiting in ") + what);
            z[i] = 0.0;
        }
    }
}

/// One semi-implicit transport solve with mass lumping and positivity
/// limiting (Zalesak-limited antidiffusion, or a plain clip).
Eigen::VectorXd solve_species(const Mesh& mesh, const ElementCache& ec,
                              const Eigen::VectorXd& z_old, const SpeciesProblem& sp,
                              const Eigen::VectorXd& divv, double dt,
                              const SimConfig& config, const char* what) {
    const int n = mesh.n_nodes();

    // Galerkin transport operator: diffusion + divergence-form advection.
    std::vector<Triplet> trips;
    trips.reserve(mesh.n_triangles() * 9);
    for (int e = 0; e < mesh.n_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        const double A = ec.area[e];
        for (int a = 0; a < 3; ++a) {
            const Vec2 ga = ec.grad[e][a];
            const double adv = -(ga.dot(sp.w_elem[e])) * A / 3.0;
            for (int b = 0; b < 3; ++b) {
                const double diff = sp.D_elem[e] * A * ga.dot(ec.grad[e][b]);
                trips.emplace_back(t[a], t[b], diff + adv);
            }
        }
    }
    SpMat T(n, n);
    T.setFromTriplets(trips.begin(), trips.end());

    // Artificial diffusion making the low-order operator an M-matrix.
    const bool fct = config.limiter == SimConfig::Limiter::Fct;
    std::vector<double> dart(ec.edges.size(), 0.0);
    std::vector<Triplet> low;
    low.reserve(trips.size() + 4 * ec.edges.size() + n);
    for (const Triplet& tr : trips) low.push_back(tr);
    if (fct) {
        for (std::size_t k = 0; k < ec.edges.size(); ++k) {
            const auto [i, j] = ec.edges[k];
            const double d = std::max({0.0, T.coeff(i, j), T.coeff(j, i)});
            dart[k] = d;
            if (d > 0.0) {
                low.emplace_back(i, j, -d);
                low.emplace_back(j, i, -d);
                low.emplace_back(i, i, d);
                low.emplace_back(j, j, d);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        const double m = ec.lumped_mass[i];
        low.emplace_back(i, i, m / dt + m * sp.sink[i] + m * std::max(divv[i], 0.0));
    }

    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        const double m = ec.lumped_mass[i];
        rhs[i] = m / dt * z_old[i] + m * sp.source[i] - m * std::min(divv[i], 0.0) * z_old[i];
    }

    // Outer-boundary Dirichlet rows.
    std::vector<Triplet> sys;
    sys.reserve(low.size() + n);
    for (const Triplet& tr : low)
        if (!mesh.is_outer(tr.row())) sys.push_back(tr);
    for (int i = 0; i < n; ++i) {
        if (mesh.is_outer(i)) {
            sys.emplace_back(i, i, 1.0);
            rhs[i] = sp.dirichlet;
        }
    }
    SpMat S(n, n);
    S.setFromTriplets(sys.begin(), sys.end());

    Eigen::VectorXd guess = z_old;
    for (int i = 0; i < n; ++i)
        if (mesh.is_outer(i)) guess[i] = sp.dirichlet;
    Eigen::VectorXd z = solve_sparse(S, rhs, guess, config.solver, config.solver_tol,
                                     /*symmetric=*/false, what);
    clamp_tiny_negatives(z, what);
    if (!fct) return z;  // clip mode

    // Zalesak limiter on the antidiffusive edge fluxes.
    Eigen::VectorXd Pp = Eigen::VectorXd::Zero(n), Pm = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd zmax = z, zmin = z;
    for (int i = 0; i < n; ++i) {
        zmax[i] = std::max(zmax[i], z_old[i]);
        zmin[i] = std::min(zmin[i], z_old[i]);
    }
    std::vector<double> flux(ec.edges.size(), 0.0);
    for (std::size_t k = 0; k < ec.edges.size(); ++k) {
        if (dart[k] <= 0.0) continue;
        const auto [i, j] = ec.edges[k];
        const double f = dart[k] * (z[i] - z[j]);
        flux[k] = f;
        Pp[i] += std::max(0.0, f);
        Pm[i] += std::min(0.0, f);
        Pp[j] += std::max(0.0, -f);
        Pm[j] += std::min(0.0, -f);
        zmax[i] = std::max({zmax[i], z[j], z_old[j]});
        zmin[i] = std::min({zmin[i], z[j], z_old[j]});
        zmax[j] = std::max({zmax[j], z[i], z_old[i]});
        zmin[j] = std::min({zmin[j], z[i], z_old[i]});
    }
    Eigen::VectorXd Rp(n), Rm(n);
    for (int i = 0; i < n; ++i) {
        const double m = ec.lumped_mass[i];
        const double Qp = m / dt * (zmax[i] - z[i]);
        const double Qm = m / dt * (zmin[i] - z[i]);
        Rp[i] = Pp[i] > 0.0 ? std::min(1.0, Qp / Pp[i]) : 1.0;
        Rm[i] = Pm[i] < 0.0 ? std::min(1.0, Qm / Pm[i]) : 1.0;
        if (mesh.is_outer(i)) Rp[i] = Rm[i] = 1.0;
    }
    Eigen::VectorXd corr = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < ec.edges.size(); ++k) {
        const double f = flux[k];
        if (f == 0.0) continue;
        const auto [i, j] = ec.edges[k];
        const double alpha = f > 0.0 ? std::min(Rp[i], Rm[j]) : std::min(Rm[i], Rp[j]);
        corr[i] += alpha * f;
        corr[j] -= alpha * f;
    }
    for (int i = 0; i < n; ++i)
        if (!mesh.is_outer(i)) z[i] += dt / ec.lumped_mass[i] * corr[i];
    clamp_tiny_negatives(z, what);
    return z;
}

/// Momentum solve for the velocity, visco-elastic stress implicit in v.
Eigen::VectorXd solve_momentum(const Mesh& mesh, const ElementCache& ec,
                               const NodalFields& f, const Eigen::VectorXd& divv,
                               const VariableParams& /*vp*/, const KineticParams& kp,
                               double dt, const SimConfig& config) {
    const int n = mesh.n_nodes();

    // Constrained components: outer boundary clamps both, symmetry axes
    // clamp the normal component.
    std::vector<int> dof(2 * n, -1);
    int n_free = 0;
    for (int i = 0; i < n; ++i) {
        const bool outer = mesh.is_outer(i);
        const bool fix_x = outer || (mesh.tags[i] & TagLeft);
        const bool fix_y = outer || (mesh.tags[i] & TagBottom);
        if (!fix_x) dof[2 * i] = n_free++;
        if (!fix_y) dof[2 * i + 1] = n_free++;
    }

    std::vector<Triplet> trips;
    trips.reserve(mesh.n_triangles() * 36 + 2 * n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_free);

    const double nu_factor = kp.nu / (1.0 - 2.0 * kp.nu);
    for (int e = 0; e < mesh.n_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        const double A = ec.area[e];

        // Centroid values of the fields entering the stress and the load.
        double Mc = 0.0, rhoc = 0.0;
        Mat2 epsc = Mat2::Zero();
        for (int k = 0; k < 3; ++k) {
            Mc += f.M[t[k]] / 3.0;
            rhoc += f.rho[t[k]] / 3.0;
            epsc(0, 0) += f.e11[t[k]] / 3.0;
            epsc(1, 1) += f.e22[t[k]] / 3.0;
            epsc(0, 1) += f.e12[t[k]] / 3.0;
        }
        epsc(1, 0) = epsc(0, 1);
        const double stiffness = kp.E * std::sqrt(std::max(rhoc, 0.0)) / (1.0 + kp.nu);
        const Mat2 sigma_el =
            stiffness * (epsc + epsc.trace() * nu_factor * Mat2::Identity());
        const double psi = config.traction_scale * kp.xi * Mc * rhoc / (kp.R * kp.R + rhoc * rhoc);

        for (int a = 0; a < 3; ++a) {
            const Vec2 ga = ec.grad[e][a];
            for (int k = 0; k < 2; ++k) {
                const int ra = dof[2 * t[a] + k];
                if (ra < 0) continue;
                // Elastic and traction loads, moved to the right-hand side.
                rhs[ra] -= A * (sigma_el(k, 0) * ga.x() + sigma_el(k, 1) * ga.y());
                rhs[ra] -= A * psi * ga[k];
                for (int b = 0; b < 3; ++b) {
                    const Vec2 gb = ec.grad[e][b];
                    for (int l = 0; l < 2; ++l) {
                        const int cb = dof[2 * t[b] + l];
                        if (cb < 0) continue;  // constrained values are zero
                        const double visc =
                            kp.mu1 * 0.5 * ((k == l ? ga.dot(gb) : 0.0) + ga[l] * gb[k])
                            + kp.mu2 * ga[k] * gb[l];
                        trips.emplace_back(ra, cb, A * visc);
                    }
                }
            }
        }
    }

    Eigen::VectorXd guess = Eigen::VectorXd::Zero(n_free);
    if (!config.quasi_static) {
        for (int i = 0; i < n; ++i) {
            const double m = kp.rho_t * ec.lumped_mass[i];
            for (int k = 0; k < 2; ++k) {
                const int r = dof[2 * i + k];
                if (r < 0) continue;
                trips.emplace_back(r, r, m / dt);
                rhs[r] += m / dt * f.v[2 * i + k];
                rhs[r] -= m * divv[i] * f.v[2 * i + k];
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 2; ++k)
            if (dof[2 * i + k] >= 0) guess[dof[2 * i + k]] = f.v[2 * i + k];

    SpMat K(n_free, n_free);
    K.setFromTriplets(trips.begin(), trips.end());
    const Eigen::VectorXd x = solve_sparse(K, rhs, guess, config.solver, config.solver_tol,
                                           /*symmetric=*/true, "momentum");

    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 2; ++k)
            if (dof[2 * i + k] >= 0) v[2 * i + k] = x[dof[2 * i + k]];
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Time stepping
// ---------------------------------------------------------------------------

void step(SimState& state, double dt, const VariableParams& vp,
          const KineticParams& kp, const SimConfig& config) {
    const Mesh& mesh = state.mesh;
    const int n = mesh.n_nodes();
    NodalFields& f = state.f;
    const ElementCache ec(mesh);

    // Old-state element coefficients.
    const std::vector<Mat2> L_old = recover_velocity_gradient(mesh, ec, f.v);
    Eigen::VectorXd divv(n);
    for (int i = 0; i < n; ++i) divv[i] = L_old[i].trace();

    std::vector<Vec2> grad_c(mesh.n_triangles(), Vec2::Zero());
    std::vector<double> D_cells(mesh.n_triangles(), 0.0);
    for (int e = 0; e < mesh.n_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        Vec2 gc = Vec2::Zero();
        double Fm = 0.0;
        for (int k = 0; k < 3; ++k) {
            gc += f.c[t[k]] * ec.grad[e][k];
            Fm += (f.N[t[k]] + f.M[t[k]]) / 3.0;
        }
        grad_c[e] = gc;
        D_cells[e] = vp.D_F * Fm;
    }

    // --- chemistry -------------------------------------------------------
    // Sources explicit at the old state, decay implicit; an overcrowding
    // (negative) proliferation term folds into the implicit sink instead.
    Eigen::VectorXd g_old(n);
    for (int i = 0; i < n; ++i)
        g_old[i] = mmp_equilibrium(f.N[i], f.M[i], f.c[i], f.rho[i], kp);

    SpeciesProblem pN;
    pN.D_elem = D_cells;
    pN.w_elem.resize(mesh.n_triangles());
    for (int e = 0; e < mesh.n_triangles(); ++e) pN.w_elem[e] = vp.chi_F * grad_c[e];
    pN.sink = Eigen::VectorXd::Zero(n);
    pN.source = Eigen::VectorXd::Zero(n);
    pN.dirichlet = kp.N_bar;
    SpeciesProblem pM = pN;
    pM.dirichlet = kp.M_bar;
    for (int i = 0; i < n; ++i) {
        const double crowding = 1.0 - kp.kappa_F * (f.N[i] + f.M[i]);
        const double c_frac = f.c[i] / (vp.a_c_I + f.c[i]);
        const double prolif_N = kp.r_F * (1.0 + kp.r_F_max * c_frac) * crowding
                                * (f.N[i] > 0.0 ? std::pow(f.N[i], 1.0 + kp.q) : 0.0);
        const double prolif_M = kp.r_F * (1.0 + kp.r_F_max) * c_frac * crowding
                                * (f.M[i] > 0.0 ? std::pow(f.M[i], 1.0 + kp.q) : 0.0);
        pN.sink[i] = kp.delta_N + vp.k_F * f.c[i];
        pM.sink[i] = kp.delta_M;
        if (prolif_N >= 0.0)
            pN.source[i] += prolif_N;
        else
            pN.sink[i] += -prolif_N / std::max(f.N[i], 1e-300);
        if (prolif_M >= 0.0)
            pM.source[i] += prolif_M;
        else
            pM.sink[i] += -prolif_M / std::max(f.M[i], 1e-300);
        pM.source[i] += vp.k_F * f.c[i] * f.N[i];  // differentiation influx
    }

    SpeciesProblem pc;
    pc.D_elem.assign(mesh.n_triangles(), vp.D_c);
    pc.w_elem.assign(mesh.n_triangles(), Vec2::Zero());
    pc.sink = Eigen::VectorXd::Zero(n);
    pc.source = Eigen::VectorXd::Zero(n);
    pc.dirichlet = kp.c_bar;
    for (int i = 0; i < n; ++i) {
        pc.sink[i] = kp.delta_c * g_old[i];
        pc.source[i] = kp.k_c * (f.N[i] + kp.eta_I * f.M[i]) * f.c[i] / (kp.a_c_II + f.c[i]);
    }

    const Eigen::VectorXd N_new = solve_species(mesh, ec, f.N, pN, divv, dt, config, "N");
    const Eigen::VectorXd M_new = solve_species(mesh, ec, f.M, pM, divv, dt, config, "M");
    const Eigen::VectorXd c_new = solve_species(mesh, ec, f.c, pc, divv, dt, config, "c");

    // Collagen has no flux: nodal ODE with the same implicit/explicit split.
    Eigen::VectorXd rho_new(n);
    for (int i = 0; i < n; ++i) {
        const double secretion = kp.k_rho
                                 * (1.0 + kp.k_rho_max * f.c[i] / (kp.a_c_IV + f.c[i]))
                                 * (f.N[i] + kp.eta_I * f.M[i]);
        const double numer = f.rho[i] * (1.0 - dt * std::min(divv[i], 0.0)) + dt * secretion;
        const double denom = 1.0 + dt * (kp.delta_rho * g_old[i] + std::max(divv[i], 0.0));
        rho_new[i] = numer / denom;
    }

    f.N = N_new;
    f.M = M_new;
    f.c = c_new;
    f.rho = rho_new;

    // --- mechanics ---------------------------------------------------------
    const Eigen::VectorXd v_new = solve_momentum(mesh, ec, f, divv, vp, kp, dt, config);

    // --- strain (nodal ODE with recovered velocity gradient) ---------------
    const std::vector<Mat2> L_new = recover_velocity_gradient(mesh, ec, v_new);
    for (int i = 0; i < n; ++i) {
        const Mat2& L = L_new[i];
        const double omega = 0.5 * (L(0, 1) - L(1, 0));
        const double sym11 = L(0, 0);
        const double sym22 = L(1, 1);
        const double sym12 = 0.5 * (L(0, 1) + L(1, 0));
        const double tr_m1 = f.e11[i] + f.e22[i] - 1.0;
        const double r11 = 2.0 * omega * f.e12[i];
        const double r22 = -2.0 * omega * f.e12[i];
        const double r12 = -omega * (f.e11[i] - f.e22[i]);
        const double kG = growth_rate(f.N[i], f.M[i], f.c[i], kp);
        const double denom = 1.0 + dt * kG;
        f.e11[i] = (f.e11[i] + dt * (r11 - tr_m1 * sym11)) / denom;
        f.e22[i] = (f.e22[i] + dt * (r22 - tr_m1 * sym22)) / denom;
        f.e12[i] = (f.e12[i] + dt * (r12 - tr_m1 * sym12)) / denom;
    }

    // --- move the mesh ------------------------------------------------------
    for (int i = 0; i < n; ++i) {
        state.mesh.nodes[i].x() += dt * v_new[2 * i];
        state.mesh.nodes[i].y() += dt * v_new[2 * i + 1];
    }
    f.u += dt * v_new;
    f.v = v_new;
    state.time += dt;
}

void remesh(SimState& state, double h) {
    const Mesh& old = state.mesh;
    const std::vector<Vec2> rim_now = old.rim_polyline();
    const std::vector<Vec2> rim_pts = resample_polyline(rim_now, h);
    Mesh fresh = generate_mesh_from_rim(rim_pts, old.extent_x, old.extent_y, h);

    const MeshLocator locator(old.nodes, old.triangles);
    NodalFields nf;
    nf.resize_zero(fresh.n_nodes());
    int fallback_count = 0;
    auto scalar_at = [&](const MeshLocator::Location& loc, const Eigen::VectorXd& field) {
        const auto& t = old.triangles[loc.tri];
        return loc.bary[0] * field[t[0]] + loc.bary[1] * field[t[1]] + loc.bary[2] * field[t[2]];
    };
    for (int i = 0; i < fresh.n_nodes(); ++i) {
        const auto loc = locator.locate(fresh.nodes[i]);
        if (!loc.inside) ++fallback_count;
        nf.N[i] = scalar_at(loc, state.f.N);
        nf.M[i] = scalar_at(loc, state.f.M);
        nf.c[i] = scalar_at(loc, state.f.c);
        nf.rho[i] = scalar_at(loc, state.f.rho);
        nf.e11[i] = scalar_at(loc, state.f.e11);
        nf.e22[i] = scalar_at(loc, state.f.e22);
        nf.e12[i] = scalar_at(loc, state.f.e12);
        const auto& t = old.triangles[loc.tri];
        for (int k = 0; k < 2; ++k) {
            nf.u[2 * i + k] = loc.bary[0] * state.f.u[2 * t[0] + k]
                              + loc.bary[1] * state.f.u[2 * t[1] + k]
                              + loc.bary[2] * state.f.u[2 * t[2] + k];
            nf.v[2 * i + k] = loc.bary[0] * state.f.v[2 * t[0] + k]
                              + loc.bary[1] * state.f.v[2 * t[1] + k]
                              + loc.bary[2] * state.f.v[2 * t[2] + k];
        }
    }
    if (fallback_count > 0)
        std::cerr << "[wsim] remesh: nearest-element fallback for " << fallback_count
                  << " nodes\n";
    state.mesh = std::move(fresh);
    state.f = std::move(nf);
    state.quality_ref = state.mesh.quality_at_build;
}

static TimeRecord make_record(const SimState& state, double initial_area) {
    TimeRecord rec;
    rec.t = state.time;
    rec.nodes = state.mesh.nodes;
    rec.triangles = state.mesh.triangles;
    rec.u = state.f.u;
    rec.N = state.f.N;
    rec.M = state.f.M;
    rec.c = state.f.c;
    rec.rho = state.f.rho;
    rec.rim = state.mesh.rim_polyline();
    std::vector<Vec2> poly = rec.rim;
    poly.push_back(Vec2(0.0, 0.0));
    rec.rsaw = polygon_area(poly) / initial_area;
    return rec;
}

SimResult run_simulation(const SimConfig& config, const WoundGeometry& geometry,
                         const VariableParams& vp, const KineticParams& kp) {
    config.validate();
    kp.validate();
    const auto t_start = std::chrono::steady_clock::now();

    const double h = config.mesh_h > 0.0 ? config.mesh_h
                                         : auto_mesh_h(geometry, config.max_nodes);
    SimState state;
    state.mesh = generate_mesh(geometry, h);
    state.f = config.unwounded ? equilibrium_fields(state.mesh, kp)
                               : initial_conditions(state.mesh, geometry, kp);
    state.quality_ref = state.mesh.quality_at_build;

    std::vector<Vec2> poly0 = state.mesh.rim_polyline();
    poly0.push_back(Vec2(0.0, 0.0));
    const double initial_area = polygon_area(poly0);

    SimResult result;
    result.geometry = geometry;
    result.kinetic = kp;
    result.variable = vp;
    result.config = config;
    result.mesh_h = h;

    const long n_steps = std::lround(config.t_end / config.dt);
    std::set<long> record_steps;
    for (double rt = 0.0; rt < config.t_end + 0.5 * config.record_every;
         rt += config.record_every) {
        const long k = std::lround(std::min(rt, config.t_end) / config.dt);
        if (k >= 0 && k <= n_steps) record_steps.insert(k);
    }
    record_steps.insert(n_steps);

    result.records.push_back(make_record(state, initial_area));

    for (long k = 1; k <= n_steps; ++k) {
        try {
            step(state, config.dt, vp, kp, config);
            state.time = (double)k * config.dt;  // avoid accumulation drift
            if (mesh_quality(state.mesh) < config.remesh_threshold * state.quality_ref) {
                remesh(state, h);
                ++result.remesh_count;
            }
        } catch (const std::exception& err) {
            throw std::runtime_error("simulation failed at t = "
                                     + std::to_string(k * config.dt) + ": " + err.what());
        }
        if (record_steps.count(k)) result.records.push_back(make_record(state, initial_area));
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

BoundaryTrace wound_boundary_trace(const SimResult& result) {
    BoundaryTrace trace;
    trace.times = result.times();
    trace.rsaw = result.rsaw_series();
    for (const auto& rec : result.records) trace.rims.push_back(rec.rim);
    if (!trace.rsaw.empty()) {
        int arg = 0;
        for (int i = 1; i < (int)trace.rsaw.size(); ++i)
            if (trace.rsaw[i] < trace.rsaw[arg]) arg = i;  // earliest on ties
        trace.argmin_time = trace.times[arg];
        trace.min_value = trace.rsaw[arg];
        trace.final_value = trace.rsaw.back();
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

static std::string format_rsaw(double v) {
    char buf[40];
    if (v == std::floor(v) && std::abs(v) < 1e15)
        std::snprintf(buf, sizeof(buf), "%.1f", v);
    else
        std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_result(const SimResult& result, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);

    {
        std::ofstream meta(directory + "/meta");
        const Vec2 ext = domain_extent(result.geometry);
        meta << "kind = " << to_string(result.geometry.kind) << "\n"
             << "x_cut = " << result.geometry.x_cut << "\n"
             << "y_cut = " << result.geometry.y_cut << "\n";
        if (result.geometry.kind == WoundKind::Convex)
            meta << "weights = " << result.geometry.weights[0] << " "
                 << result.geometry.weights[1] << " " << result.geometry.weights[2] << "\n";
        meta << "x_l = " << ext.x() << "\n"
             << "y_l = " << ext.y() << "\n"
             << "dt = " << result.config.dt << "\n"
             << "t_end = " << result.config.t_end << "\n"
             << "mesh_h = " << result.mesh_h << "\n"
             << "remesh_count = " << result.remesh_count << "\n"
             << "records = " << result.records.size() << "\n"
             << "wall_seconds = " << result.wall_seconds << "\n";
    }
    write_params_file(directory + "/params", result.kinetic, result.variable);

    {
        std::ofstream rs(directory + "/rsaw.csv");
        rs << "t,rsaw\n";
        char tbuf[40];
        for (const auto& rec : result.records) {
            std::snprintf(tbuf, sizeof(tbuf), "%g", rec.t);
            rs << tbuf << "," << format_rsaw(rec.rsaw) << "\n";
        }
    }

    char buf[256];
    for (const auto& rec : result.records) {
        char tlabel[40];
        std::snprintf(tlabel, sizeof(tlabel), "%g", rec.t);
        std::ofstream csv(directory + "/t_" + tlabel + ".csv");
        csv << "x,y,u1,u2,N,M,c,rho\n";
        for (std::size_t i = 0; i < rec.nodes.size(); ++i) {
            std::snprintf(buf, sizeof(buf),
                          "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          rec.nodes[i].x(), rec.nodes[i].y(), rec.u[2 * i], rec.u[2 * i + 1],
                          rec.N[i], rec.M[i], rec.c[i], rec.rho[i]);
            csv << buf;
        }
    }
}

}  // namespace wsim
