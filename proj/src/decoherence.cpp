#include "fluxsim/decoherence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fluxsim/constants.hpp"
#include "fluxsim/errors.hpp"

namespace fluxsim {

using constants::ghz_to_kelvin;
using constants::two_pi;

namespace {

// coth via expm1: coth(x) = 1 + 2/(e^{2x} - 1); saturates to 1 for large x
// instead of overflowing (sub-mK temperatures give x ~ 1e4).
double coth_stable(double x) {
    if (x > 350.0) return 1.0;
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

constexpr double inv_ns_to_inv_us = 1e3;  // GHz = 1/ns; rates reported in 1/us

}  // namespace

void NoiseEnvironment::validate() const {
    if (!(temp_qubit > 0.0)) throw std::invalid_argument("NoiseEnvironment: temp_qubit must be > 0");
    if (temp_res && !(*temp_res > 0.0)) {
        throw std::invalid_argument("NoiseEnvironment: temp_res must be > 0");
    }
    if (temp_res && n_th) {
        throw std::invalid_argument("NoiseEnvironment: give one of temp_res / nth, not both");
    }
    if (n_th && !(*n_th >= 0.0)) throw std::invalid_argument("NoiseEnvironment: nth must be >= 0");
    if (!(a_phi >= 0.0)) throw std::invalid_argument("NoiseEnvironment: a_phi must be >= 0");
    if (!(tan_delta >= 0.0)) {
        throw std::invalid_argument("NoiseEnvironment: tan_delta must be >= 0");
    }
}

double dielectric_rate(double e_c, double n01_abs, double f01, double tan_delta, double temp_k) {
    if (!(e_c > 0.0) || !(f01 > 0.0) || !(tan_delta >= 0.0) || !(temp_k >= 0.0)) {
        throw std::invalid_argument("dielectric_rate: inputs must be positive");
    }
    // coth argument h f01 / (2 k_B T) with f01 in GHz: ghz_to_kelvin * f01 / (2 T).
    const double th = temp_k == 0.0 ? 1.0 : coth_stable(ghz_to_kelvin * f01 / (2.0 * temp_k));
    return 16.0 * constants::pi * e_c * n01_abs * n01_abs * tan_delta * (1.0 + th)
           * inv_ns_to_inv_us;
}

double tan_delta_from_t1(double t1_us, double e_c, double n01_abs, double f01, double temp_k) {
    if (!(t1_us > 0.0)) throw std::invalid_argument("tan_delta_from_t1: t1 must be > 0");
    const double th = temp_k == 0.0 ? 1.0 : coth_stable(ghz_to_kelvin * f01 / (2.0 * temp_k));
    return 1.0
           / (t1_us * 16.0 * constants::pi * e_c * n01_abs * n01_abs * (1.0 + th)
              * inv_ns_to_inv_us);
}

namespace {

// Raw dimensionless forms on consistent angular rates; the public API converts
// MHz -> rad/us (factor 2 pi, since MHz = 1/us linear).
double thermal_rate_raw(double n_th, double kappa, double chi) {
    return n_th * kappa * chi * chi / (kappa * kappa + chi * chi);
}

double nth_raw(double gamma_phi, double kappa, double chi) {
    return gamma_phi * (kappa * kappa + chi * chi) / (kappa * chi * chi);
}

}  // namespace

double thermal_photon_rate(double n_th, double kappa_mhz, double chi_mhz) {
    if (!(n_th >= 0.0)) throw std::invalid_argument("thermal_photon_rate: n_th must be >= 0");
    if (!(kappa_mhz > 0.0)) throw std::invalid_argument("thermal_photon_rate: kappa must be > 0");
    return thermal_rate_raw(n_th, two_pi * kappa_mhz, two_pi * chi_mhz);
}

double nth_from_tphi(double tphi_us, double kappa_mhz, double chi_mhz) {
    if (!(kappa_mhz > 0.0) || !(chi_mhz != 0.0)) {
        throw std::invalid_argument("nth_from_tphi: kappa and chi must be nonzero");
    }
    if (std::isinf(tphi_us)) return 0.0;
    if (!(tphi_us > 0.0)) throw std::invalid_argument("nth_from_tphi: tphi must be > 0");
    return nth_raw(1.0 / tphi_us, two_pi * kappa_mhz, two_pi * std::abs(chi_mhz));
}

double temp_from_nth(double n_th, double f_r_ghz) {
    if (!(n_th > 0.0) || !(f_r_ghz > 0.0)) {
        throw std::invalid_argument("temp_from_nth: inputs must be > 0");
    }
    return ghz_to_kelvin * f_r_ghz / std::log1p(1.0 / n_th);
}

double nth_from_temp(double temp_k, double f_r_ghz) {
    if (!(temp_k > 0.0) || !(f_r_ghz > 0.0)) {
        throw std::invalid_argument("nth_from_temp: inputs must be > 0");
    }
    return 1.0 / std::expm1(ghz_to_kelvin * f_r_ghz / temp_k);
}

ValueWithError nth_from_tphi_with_err(double tphi_us, double tphi_err_us, double kappa_mhz,
                                      double chi_mhz) {
    ValueWithError out;
    out.value = nth_from_tphi(tphi_us, kappa_mhz, chi_mhz);
    // n_th is linear in Gamma_phi = 1/tphi: dn/n = dtphi/tphi.
    out.error = out.value * tphi_err_us / tphi_us;
    return out;
}

ValueWithError temp_from_nth_with_err(const ValueWithError& n_th, double f_r_ghz) {
    ValueWithError out;
    out.value = temp_from_nth(n_th.value, f_r_ghz);
    // dT/dn of T = c / log1p(1/n): c/(log1p(1/n))^2 * 1/(n(n+1)).
    const double l = std::log1p(1.0 / n_th.value);
    const double dTdn = ghz_to_kelvin * f_r_ghz / (l * l) / (n_th.value * (n_th.value + 1.0));
    out.error = dTdn * n_th.error;
    return out;
}

double flux_noise_rate(double a_phi_uphi0, double dfdflux_ghz) {
    if (!(a_phi_uphi0 >= 0.0)) throw std::invalid_argument("flux_noise_rate: a_phi must be >= 0");
    // A_Phi in Phi_0 units (1e-6 of uPhi_0); d omega/d Phi = 2 pi * df/dflux in
    // rad/ns per Phi_0, then 1/ns -> 1/us.
    return a_phi_uphi0 * 1e-6 * std::sqrt(std::log(2.0)) * two_pi * std::abs(dfdflux_ghz)
           * inv_ns_to_inv_us;
}

double pure_dephasing_from_t1t2(double t1_us, double t2_us) {
    if (!(t1_us > 0.0) || !(t2_us > 0.0)) {
        throw std::invalid_argument("pure_dephasing_from_t1t2: times must be > 0");
    }
    if (t2_us > 2.0 * t1_us) {
        throw std::invalid_argument("pure_dephasing_from_t1t2: unphysical input, t2 > 2 t1");
    }
    const double rate = 1.0 / t2_us - 1.0 / (2.0 * t1_us);
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / rate;
}

double coherence_limit_rb(double t_cliff_ns, double t2_us) {
    if (!(t_cliff_ns > 0.0) || !(t2_us > 0.0)) {
        throw std::invalid_argument("coherence_limit_rb: inputs must be > 0");
    }
    return (t_cliff_ns * 1e-3) / t2_us;
}

RateBudget coherence_budget(const BudgetInputs& inputs) {
    if (!inputs.dielectric && !inputs.thermal && !inputs.flux_noise) {
        throw std::invalid_argument("coherence_budget: no mechanism configured");
    }
    RateBudget budget;
    double gamma1 = 0.0;
    double gamma_phi = 0.0;
    if (inputs.dielectric) {
        const auto& d = *inputs.dielectric;
        const double r = dielectric_rate(d.e_c, d.n01_abs, d.f01, d.tan_delta, d.temp_k);
        budget.contributions.push_back({"dielectric_loss", r, "exponential"});
        gamma1 += r;
    }
    if (inputs.thermal) {
        const auto& t = *inputs.thermal;
        const double r = thermal_photon_rate(t.n_th, t.kappa_mhz, t.chi_mhz);
        budget.contributions.push_back({"thermal_photon_dephasing", r, "exponential"});
        gamma_phi += r;
    }
    if (inputs.flux_noise) {
        const auto& f = *inputs.flux_noise;
        const double r = flux_noise_rate(f.a_phi_uphi0, f.dfdflux_ghz);
        budget.contributions.push_back({"flux_noise_dephasing", r, "gaussian"});
        gamma_phi += r;
    }
    const double inf = std::numeric_limits<double>::infinity();
    budget.t1_pred = gamma1 > 0.0 ? 1.0 / gamma1 : inf;
    budget.tphi_pred = gamma_phi > 0.0 ? 1.0 / gamma_phi : inf;
    const double gamma2 = (gamma1 > 0.0 ? 0.5 * gamma1 : 0.0) + gamma_phi;
    budget.t2_pred = gamma2 > 0.0 ? 1.0 / gamma2 : inf;
    return budget;
}

std::vector<FluxT2Point> flux_dephasing_profile(const FluxoniumParams& params,
                                                const BasisConfig& basis, double a_phi_uphi0,
                                                const std::vector<double>& flux_grid,
                                                double t1_floor_us) {
    if (flux_grid.empty()) throw std::invalid_argument("flux_dephasing_profile: empty grid");
    if (!(t1_floor_us > 0.0)) {
        throw std::invalid_argument("flux_dephasing_profile: t1_floor must be > 0");
    }
    std::vector<FluxT2Point> out;
    out.reserve(flux_grid.size());
    for (const double flux : flux_grid) {
        const Derivative d = flux_derivative(params, basis, flux, {0, 1});
        const double gamma = flux_noise_rate(a_phi_uphi0, d.value);
        out.push_back({flux, 1.0 / (1.0 / (2.0 * t1_floor_us) + gamma)});
    }
    return out;
}

}  // namespace fluxsim
