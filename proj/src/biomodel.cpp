#include "wsim/biomodel.hpp"

#include <cmath>
#include <stdexcept>

namespace wsim {

double mmp_equilibrium(double N, double M, double c, double rho,
                       const KineticParams& kp) {
    return (N + kp.eta_II * M) * rho / (1.0 + kp.a_c_III * c);
}

// x^(1+q) with 0^(1+q) := 0; 1+q > 0 is checked at parameter validation.
static double growth_power(double x, double q) {
    if (x == 0.0) return 0.0;
    return std::pow(x, 1.0 + q);
}

ReactionTerms reaction_terms(const PointState& s, const VariableParams& vp,
                             const KineticParams& kp) {
    if (s.N < 0.0 || s.M < 0.0 || s.c < 0.0 || s.rho < 0.0)
        throw std::domain_error("reaction_terms: negative field value");

    const double F = s.N + s.M;
    const double crowding = 1.0 - kp.kappa_F * F;
    const double c_frac_I = s.c / (vp.a_c_I + s.c);
    const double g = mmp_equilibrium(s.N, s.M, s.c, s.rho, kp);

    ReactionTerms r;
    r.R_N = kp.r_F * (1.0 + kp.r_F_max * c_frac_I) * crowding * growth_power(s.N, kp.q)
            - vp.k_F * s.c * s.N - kp.delta_N * s.N;

    // Proliferation solely in the presence of c; differentiated fibroblasts
    // enter as the k_F*c*N source.
    r.R_M = kp.r_F * ((1.0 + kp.r_F_max) * c_frac_I) * crowding * growth_power(s.M, kp.q)
            + vp.k_F * s.c * s.N - kp.delta_M * s.M;

    r.R_c = kp.k_c * (s.N + kp.eta_I * s.M) * s.c / (kp.a_c_II + s.c)
            - kp.delta_c * g * s.c;

    r.R_rho = kp.k_rho * (1.0 + kp.k_rho_max * s.c / (kp.a_c_IV + s.c)) * (s.N + kp.eta_I * s.M)
              - kp.delta_rho * g * s.rho;
    return r;
}

Fluxes fluxes(const PointState& s, const Eigen::Vector2d& grad_N,
              const Eigen::Vector2d& grad_M, const Eigen::Vector2d& grad_c,
              const VariableParams& vp) {
    const double F = s.N + s.M;
    Fluxes out;
    out.J_N = -vp.D_F * F * grad_N + vp.chi_F * s.N * grad_c;
    out.J_M = -vp.D_F * F * grad_M + vp.chi_F * s.M * grad_c;
    out.J_c = -vp.D_c * grad_c;
    return out;
}

Mat2 stress_tensor(const Mat2& grad_v, const Mat2& eps, double rho,
                   const KineticParams& kp) {
    if (kp.nu == 0.5) throw std::domain_error("stress_tensor: nu = 0.5 is singular");
    const Mat2 sym_gv = 0.5 * (grad_v + grad_v.transpose());
    const double stiffness = kp.E * std::sqrt(rho) / (1.0 + kp.nu);
    const double trace_factor = eps.trace() * kp.nu / (1.0 - 2.0 * kp.nu);
    return kp.mu1 * sym_gv + kp.mu2 * sym_gv.trace() * Mat2::Identity()
           + stiffness * (eps + trace_factor * Mat2::Identity());
}

Mat2 myofibroblast_traction(double M, double rho, const KineticParams& kp) {
    const double magnitude = kp.xi * M * rho / (kp.R * kp.R + rho * rho);
    return magnitude * Mat2::Identity();
}

double growth_rate(double N, double M, double c, const KineticParams& kp) {
    return kp.zeta * (N + kp.eta_II * M) * c / (1.0 + kp.a_c_III * c);
}

Mat2 growth_tensor(double N, double M, double c, const Mat2& eps,
                   const KineticParams& kp) {
    return growth_rate(N, M, c, kp) * eps;
}

ReactionTerms equilibrium_residual(const KineticParams& kp,
                                   const VariableParams& vp) {
    PointState bar;
    bar.N = kp.N_bar;
    bar.M = kp.M_bar;
    bar.c = kp.c_bar;
    bar.rho = kp.rho_bar;
    return reaction_terms(bar, vp, kp);
}

}  // namespace wsim
