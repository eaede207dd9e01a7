// Model parameter records: the fixed kinetic/mechanical constants and the
// five patient-variable parameters, with validation and flat key-value
// (de)serialization so campaigns are reproducible from config alone.
//
// Units follow the cm-g-day-cells system throughout.

#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "wsim/rng.hpp"

namespace wsim {

/// Fixed constants of the kinetics and mechanics.
struct KineticParams {
    double k_c = 4e-13;        // g/(cells day), max net secretion rate of c
    double r_F = 9.24e-1;      // cm^{3q}/(cells^q day), cell division rate
    double r_F_max = 2.0;      // -, max division-rate enhancement
    double k_rho = 7.6e-8;     // g/(cells day), collagen secretion rate
    double k_rho_max = 10.0;   // -, max secretion-rate enhancement
    double a_c_II = 1e-8;      // g/cm^3, half-max c secretion concentration
    double a_c_III = 2e8;      // cm^3/g, MMP secretion inhibition
    double a_c_IV = 1e-9;      // g/cm^3, half-max rho secretion enhancement
    double eta_I = 2.0;        // -, myo/fibro ratio in secretion rates
    double eta_II = 5e-1;      // -, myo/fibro ratio in MMP secretion
    double kappa_F = 1e-6;     // cm^3/cells, crowding reduction
    double q = -4.151e-1;      // -, growth-law exponent offset
    double delta_N = 2e-2;     // /day, fibroblast apoptosis rate
    double delta_M = 6e-2;     // /day, myofibroblast apoptosis rate
    double delta_c = 5e-4;     // cm^6/(cells g day), c breakdown rate
    double delta_rho = 6e-6;   // cm^6/(cells g day), rho degradation rate
    double N_bar = 1e4;        // cells/cm^3, equilibrium fibroblasts
    double M_bar = 0.0;        // cells/cm^3, equilibrium myofibroblasts
    double c_bar = 0.0;        // g/cm^3, equilibrium signaling molecule
    double rho_bar = 1.125e-1; // g/cm^3, equilibrium collagen
    double rho_t = 1.09;       // g/cm^3, total mass density of dermal tissue
    double mu1 = 1e2;          // N day/cm^2, shear viscosity
    double mu2 = 1e2;          // N day/cm^2, bulk viscosity
    double E = 32.0;           // N/((g cm)^0.5), stiffness scale
    double xi = 5e-2;          // N g/(cells cm^2), generated stress per cell
    double R = 9.95e-1;        // g/cm^3, traction saturation constant
    double zeta = 4e2;         // cm^6/(cells g day), morphoelastic-change rate
    double nu = 4.9e-1;        // -, Poisson's ratio
    double N_tilde = 2e3;      // cells/cm^3, initial wound fibroblasts
    double c_tilde = 1e-8;     // g/cm^3, initial wound signaling molecule
    double rho_tilde = 1.13e-2;// g/cm^3, initial wound collagen

    /// Throws std::invalid_argument when a value is out of its admissible set.
    void validate() const;
};

/// Table-1 sampling ranges for the five patient-variable parameters.
struct VariableParamRanges {
    std::array<double, 2> D_F{7.6167e-7, 1.2e-6};
    std::array<double, 2> chi_F{2e-3, 3e-3};
    std::array<double, 2> D_c{2.22e-3, 3.2e-3};
    std::array<double, 2> k_F{8e6, 1.08e7};
    std::array<double, 2> a_c_I{0.9e-8, 1.1e-8};
};

/// The five parameters that vary between patients (branch inputs).
struct VariableParams {
    double D_F = 9.8e-7;       // cm^5/(cells day), (myo)fibroblast diffusion
    double chi_F = 2.5e-3;     // cm^5/(g day), chemotaxis
    double D_c = 2.7e-3;       // cm^2/day, signaling-molecule diffusion
    double k_F = 1.0e7;        // cm^3/(g day), differentiation rate
    double a_c_I = 1.0e-8;     // g/cm^3, half-max division enhancement

    std::array<double, 5> as_array() const { return {D_F, chi_F, D_c, k_F, a_c_I}; }

    /// Throws std::invalid_argument when a value falls outside its range.
    void validate(const VariableParamRanges& ranges = {}) const;
};

/// Independent uniform draws over the Table-1 ranges, in fixed order
/// D_F, chi_F, D_c, k_F, a_c_I.
VariableParams sample_variable_params(Rng& rng,
                                      const VariableParamRanges& ranges = {});

// Flat `name = value` serialization.
void write_params(std::ostream& out, const KineticParams& kp,
                  const VariableParams& vp);
void write_params_file(const std::string& path, const KineticParams& kp,
                       const VariableParams& vp);
void read_params(std::istream& in, KineticParams& kp, VariableParams& vp);
void read_params_file(const std::string& path, KineticParams& kp,
                      VariableParams& vp);

}  // namespace wsim
