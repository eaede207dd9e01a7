#include "wsim/params.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wsim {

void KineticParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("KineticParams: ") + what);
    };
    require(nu > 0.0 && nu < 0.5, "nu must lie in (0, 0.5)");
    require(M_bar == 0.0, "M_bar must be zero");
    require(c_bar == 0.0, "c_bar must be zero");
    require(1.0 + q > 0.0, "1+q must be positive");
    for (double rate : {k_c, r_F, r_F_max, k_rho, k_rho_max, a_c_II, a_c_III,
                        a_c_IV, eta_I, eta_II, kappa_F, delta_N, delta_M,
                        delta_c, delta_rho, N_bar, rho_bar, rho_t, mu1, mu2, E,
                        xi, R, zeta, N_tilde, c_tilde, rho_tilde})
        require(rate >= 0.0, "rates and densities must be non-negative");
}

void VariableParams::validate(const VariableParamRanges& r) const {
    auto in = [](double v, const std::array<double, 2>& range) {
        return v >= range[0] && v <= range[1];
    };
    if (!in(D_F, r.D_F)) throw std::invalid_argument("VariableParams: D_F out of range");
    if (!in(chi_F, r.chi_F)) throw std::invalid_argument("VariableParams: chi_F out of range");
    if (!in(D_c, r.D_c)) throw std::invalid_argument("VariableParams: D_c out of range");
    if (!in(k_F, r.k_F)) throw std::invalid_argument("VariableParams: k_F out of range");
    if (!in(a_c_I, r.a_c_I)) throw std::invalid_argument("VariableParams: a_c_I out of range");
}

VariableParams sample_variable_params(Rng& rng, const VariableParamRanges& r) {
    VariableParams vp;
    vp.D_F = rng.uniform(r.D_F[0], r.D_F[1]);
    vp.chi_F = rng.uniform(r.chi_F[0], r.chi_F[1]);
    vp.D_c = rng.uniform(r.D_c[0], r.D_c[1]);
    vp.k_F = rng.uniform(r.k_F[0], r.k_F[1]);
    vp.a_c_I = rng.uniform(r.a_c_I[0], r.a_c_I[1]);
    return vp;
}

namespace {

using FieldMap = std::vector<std::pair<std::string, double*>>;

FieldMap field_map(KineticParams& kp, VariableParams& vp) {
    return {
        {"k_c", &kp.k_c},           {"r_F", &kp.r_F},
        {"r_F_max", &kp.r_F_max},   {"k_rho", &kp.k_rho},
        {"k_rho_max", &kp.k_rho_max}, {"a_c_II", &kp.a_c_II},
        {"a_c_III", &kp.a_c_III},   {"a_c_IV", &kp.a_c_IV},
        {"eta_I", &kp.eta_I},       {"eta_II", &kp.eta_II},
        {"kappa_F", &kp.kappa_F},   {"q", &kp.q},
        {"delta_N", &kp.delta_N},   {"delta_M", &kp.delta_M},
        {"delta_c", &kp.delta_c},   {"delta_rho", &kp.delta_rho},
        {"N_bar", &kp.N_bar},       {"M_bar", &kp.M_bar},
        {"c_bar", &kp.c_bar},       {"rho_bar", &kp.rho_bar},
        {"rho_t", &kp.rho_t},       {"mu1", &kp.mu1},
        {"mu2", &kp.mu2},           {"E", &kp.E},
        {"xi", &kp.xi},             {"R", &kp.R},
        {"zeta", &kp.zeta},         {"nu", &kp.nu},
        {"N_tilde", &kp.N_tilde},   {"c_tilde", &kp.c_tilde},
        {"rho_tilde", &kp.rho_tilde},
        {"D_F", &vp.D_F},           {"chi_F", &vp.chi_F},
        {"D_c", &vp.D_c},           {"k_F", &vp.k_F},
        {"a_c_I", &vp.a_c_I},
    };
}

}  // namespace

void write_params(std::ostream& out, const KineticParams& kp_in,
                  const VariableParams& vp_in) {
    auto kp = kp_in;
    auto vp = vp_in;
    char buf[96];
    for (const auto& [name, ptr] : field_map(kp, vp)) {
        std::snprintf(buf, sizeof(buf), "%s = %.17g\n", name.c_str(), *ptr);
        out << buf;
    }
}

void write_params_file(const std::string& path, const KineticParams& kp,
                       const VariableParams& vp) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_params(f, kp, vp);
}

void read_params(std::istream& in, KineticParams& kp, VariableParams& vp) {
    auto fields = field_map(kp, vp);
    std::map<std::string, double*> lookup(fields.begin(), fields.end());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed parameter line: " + line);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string name = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = lookup.find(name);
        if (it == lookup.end())
            throw std::runtime_error("unknown parameter: " + name);
        *it->second = std::stod(value);
    }
}

void read_params_file(const std::string& path, KineticParams& kp,
                      VariableParams& vp) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    read_params(f, kp, vp);
}

}  // namespace wsim
