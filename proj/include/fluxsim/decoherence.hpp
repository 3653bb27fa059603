#pragma once

// Decoherence-rate formulas (dielectric loss, thermal-photon dephasing,
// first-order 1/f flux noise), their algebraic inversions, and the combined
// T1/T2/Tphi budget. Rates are 1/us, times us.

#include <optional>
#include <string>
#include <vector>

#include "fluxsim/core_model.hpp"
#include "fluxsim/spectra.hpp"

namespace fluxsim {

struct NoiseEnvironment {
    double temp_qubit = 0.020;           // K
    std::optional<double> temp_res;      // K (one of temp_res / n_th)
    std::optional<double> n_th;          // mean resonator photon number
    double a_phi = 0.0;                  // flux-noise amplitude at 1 Hz, uPhi_0/sqrt(Hz)
    double tan_delta = 0.0;              // dielectric loss tangent

    void validate() const;
};

struct RateContribution {
    std::string mechanism;
    double rate_per_us = 0.0;
    std::string envelope;  // "exponential" or "gaussian" decay tag
};

struct RateBudget {
    std::vector<RateContribution> contributions;
    double t1_pred = 0.0;    // us
    double tphi_pred = 0.0;  // us, may be +inf
    double t2_pred = 0.0;    // us; 1/t2 = 1/(2 t1) + sum of dephasing rates
};

// Dielectric decay rate between neighbouring eigenstates,
// Gamma = 16 pi E_C |n_01|^2 tan(delta_C) [1 + coth(h f01 / (2 k_B T))],
// with e_c and f01 in GHz, returned in 1/us. temp = 0 takes the coth -> 1 limit.
double dielectric_rate(double e_c, double n01_abs, double f01, double tan_delta, double temp_k);

// Exact inversion of dielectric_rate given the measured T1.
double tan_delta_from_t1(double t1_us, double e_c, double n01_abs, double f01, double temp_k);

// Thermal-photon dephasing Gamma_phi = n_th kappa chi^2 / (kappa^2 + chi^2);
// kappa and chi are passed in MHz (linear) and converted to angular rates
// internally. Result in 1/us.
double thermal_photon_rate(double n_th, double kappa_mhz, double chi_mhz);

// Inversions of the thermal-photon chain.
double nth_from_tphi(double tphi_us, double kappa_mhz, double chi_mhz);
double temp_from_nth(double n_th, double f_r_ghz);  // Bose-Einstein occupation, K
double nth_from_temp(double temp_k, double f_r_ghz);

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

// First-order uncertainty propagation from the T_phi error bar only.
ValueWithError nth_from_tphi_with_err(double tphi_us, double tphi_err_us, double kappa_mhz,
                                      double chi_mhz);
ValueWithError temp_from_nth_with_err(const ValueWithError& n_th, double f_r_ghz);

// First-order 1/f flux-noise dephasing rate,
// Gamma_Phi = A_Phi sqrt(ln 2) |d omega / d Phi_ext|, Gaussian envelope.
// a_phi in uPhi_0/sqrt(Hz), slope in GHz/Phi_0, result in 1/us.
double flux_noise_rate(double a_phi_uphi0, double dfdflux_ghz);

// 1/t_phi = 1/t2 - 1/(2 t1). Returns +inf when t2 = 2 t1; throws on t2 > 2 t1.
double pure_dephasing_from_t1t2(double t1_us, double t2_us);

// Coherence limit on the Clifford error rate, t_cliff / t2.
double coherence_limit_rb(double t_cliff_ns, double t2_us);

struct DielectricChannel {
    double e_c = 0.0;
    double n01_abs = 0.0;
    double f01 = 0.0;
    double tan_delta = 0.0;
    double temp_k = 0.020;
};

struct ThermalPhotonChannel {
    double n_th = 0.0;
    double kappa_mhz = 0.0;
    double chi_mhz = 0.0;
};

struct FluxNoiseChannel {
    double a_phi_uphi0 = 0.0;
    double dfdflux_ghz = 0.0;
};

struct BudgetInputs {
    std::optional<DielectricChannel> dielectric;
    std::optional<ThermalPhotonChannel> thermal;
    std::optional<FluxNoiseChannel> flux_noise;
};

// T1 from the dielectric channel, T_phi from thermal-photon + flux-noise rates
// added scalar-wise, T2 from the combination rule. Envelope shapes are
// reported per contribution but not convolved.
RateBudget coherence_budget(const BudgetInputs& inputs);

struct FluxT2Point {
    double flux = 0.0;
    double t2 = 0.0;  // us
};

// Predicted T2(flux) = 1/(1/(2 t1_floor) + Gamma_Phi(flux)); saturates at
// 2 t1_floor at the sweet spot.
std::vector<FluxT2Point> flux_dephasing_profile(const FluxoniumParams& params,
                                                const BasisConfig& basis, double a_phi_uphi0,
                                                const std::vector<double>& flux_grid,
                                                double t1_floor_us);

}  // namespace fluxsim
