// Pointwise constitutive formulas of the morphoelastic contraction model:
// fluxes, reaction kinetics, MMP equilibrium, stress, myofibroblast
// traction, and the growth tensor. Pure functions of local state.

#pragma once

#include <Eigen/Core>
#include <array>

#include "wsim/params.hpp"

namespace wsim {

using Mat2 = Eigen::Matrix2d;

/// Local field values at a point.
struct PointState {
    double N = 0.0;    // cells/cm^3, fibroblasts
    double M = 0.0;    // cells/cm^3, myofibroblasts
    double c = 0.0;    // g/cm^3, signaling molecule
    double rho = 0.0;  // g/cm^3, collagen
};

struct ReactionTerms {
    double R_N = 0.0;
    double R_M = 0.0;
    double R_c = 0.0;
    double R_rho = 0.0;
};

struct Fluxes {
    Eigen::Vector2d J_N;
    Eigen::Vector2d J_M;
    Eigen::Vector2d J_c;
};

/// Equilibrium MMP concentration g = (N + eta_II * M) * rho / (1 + a_c_III * c).
double mmp_equilibrium(double N, double M, double c, double rho,
                       const KineticParams& kp);

/// Reaction kinetics for (N, M, c, rho). The myofibroblast equation carries
/// the differentiation source k_F*c*N that balances the sink in R_N.
/// Throws std::domain_error for negative densities (fractional power).
ReactionTerms reaction_terms(const PointState& s, const VariableParams& vp,
                             const KineticParams& kp);

/// Constituent fluxes: J_N = -D_F*F*grad N + chi_F*N*grad c (F = N+M),
/// J_M analogous, J_c = -D_c*grad c. Collagen has no flux.
Fluxes fluxes(const PointState& s, const Eigen::Vector2d& grad_N,
              const Eigen::Vector2d& grad_M, const Eigen::Vector2d& grad_c,
              const VariableParams& vp);

/// Visco-elastic stress sigma(grad v, eps, rho).
/// Throws std::domain_error when nu = 0.5 (singular material).
Mat2 stress_tensor(const Mat2& grad_v, const Mat2& eps, double rho,
                   const KineticParams& kp);

/// Isotropic myofibroblast traction psi = xi*M*rho/(R^2 + rho^2) * I.
Mat2 myofibroblast_traction(double M, double rho, const KineticParams& kp);

/// Scalar rate in the growth tensor G = growth_rate(...) * eps.
double growth_rate(double N, double M, double c, const KineticParams& kp);

/// Growth tensor G = zeta * (N + eta_II*M) * c / (1 + a_c_III*c) * eps.
Mat2 growth_tensor(double N, double M, double c, const Mat2& eps,
                   const KineticParams& kp);

/// Reactions evaluated at the equilibrium bar values; validates the
/// consistency of the parameter table.
ReactionTerms equilibrium_residual(const KineticParams& kp,
                                   const VariableParams& vp);

}  // namespace wsim
