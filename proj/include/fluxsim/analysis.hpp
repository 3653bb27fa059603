#pragma once

// Curve-fitting stack: damped least squares with finite-difference Jacobians,
// the measurement models used throughout (exponential, Gaussian, damped
// cosine, Lorentzian, RB sequence fidelity, T2-vs-flux, coupled-Hamiltonian
// spectroscopy) and seeded synthetic-data generators.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fluxsim/core_model.hpp"

namespace fluxsim {

struct DecayTrace {
    std::vector<double> t;  // us, strictly increasing
    std::vector<double> y;
    std::vector<double> sigma;  // optional per-point noise, empty or same length

    void validate() const;  // lengths equal and >= 5
};

struct RBDataset {
    std::vector<int> m;     // Clifford sequence lengths, strictly increasing
    std::vector<double> f;  // mean sequence fidelities
    int n_rand = 0;         // randomizations per point

    void validate() const;
};

struct FitResult {
    std::map<std::string, double> params;
    std::map<std::string, double> stderrs;
    double residual_rms = 0.0;
    bool converged = false;
    int n_iter = 0;
};

struct LmOptions {
    int max_iter = 200;
    double grad_tol = 1e-10;
    double fd_step = 1e-6;  // relative finite-difference step
};

// Damped least squares (Levenberg-Marquardt with Marquardt scaling).
// Returns the solution vector with convergence flag; never throws on
// non-convergence.
struct LmOutcome {
    Eigen::VectorXd x;
    Eigen::VectorXd stderrs;
    double residual_rms = 0.0;
    bool converged = false;
    int n_iter = 0;
};
LmOutcome lm_fit(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                 Eigen::VectorXd x0, const LmOptions& opt = {});

// y = A exp(-t/T) + B
FitResult fit_exponential(const DecayTrace& trace);

// y = A exp(-(t/T)^2) + B
FitResult fit_gaussian_decay(const DecayTrace& trace);

// y = A exp(-t/T) cos(2 pi f t + phi) + B; f initialized from a discrete
// spectral peak of the detrended trace. Frequency unit is the inverse of the
// time unit.
FitResult fit_damped_cosine(const DecayTrace& trace);

struct FrequencyScan {
    std::vector<double> f;  // MHz (or any frequency unit), strictly increasing
    std::vector<double> y;

    void validate() const;  // >= 7 points
};

// y = offset + depth * (fwhm/2)^2 / ((f - f0)^2 + (fwhm/2)^2); depth < 0 fits
// a dip.
FitResult fit_lorentzian(const FrequencyScan& scan);

// Dispersive shift from two scans (qubit prepared in |0> and |1>):
// |f0_ground - f0_excited| in the scan's frequency unit.
double chi_from_scans(const FrequencyScan& ground, const FrequencyScan& excited);

// Sequence fidelity A + B p^m. Reports r_cliff = (1-p)/2, f_cliff = 1-r_cliff,
// r_g = r_cliff/1.833, f_g = 1-r_g. converged=false if p lands outside (0,1).
FitResult fit_rb(const RBDataset& data);

// Deterministic synthetic RB dataset: per m, the mean of n_rand Gaussian draws
// around A + B p^m with standard deviation sigma.
RBDataset synth_rb(double p, double a, double b, const std::vector<int>& m_list, double sigma,
                   int n_rand, std::uint64_t seed);

enum class TransitionLabel { f01, f02, resonator };

struct SpectroscopyPoint {
    double flux = 0.0;
    double f_ghz = 0.0;
    TransitionLabel label = TransitionLabel::f01;
};

struct HamiltonianGuess {
    double e_j = 0.0;
    double e_l = 0.0;
    double e_c = 0.0;
    double f_r = 0.0;
    double g_ghz = 0.0;
};

// Least squares of dressed-transition frequencies against labeled
// observations. The spectrum is invariant under g -> -g, so |g| is fitted and
// reported. fit_resonator=false holds (f_r, g) fixed at the guess. The
// reduced default basis keeps each model evaluation cheap; pass a larger one
// for production fits.
FitResult fit_hamiltonian(const std::vector<SpectroscopyPoint>& points,
                          const HamiltonianGuess& guess, bool fit_resonator = true,
                          const BasisConfig& basis = BasisConfig{40, 12, 4, 30});

struct FluxT2Observation {
    double flux = 0.0;
    double t2 = 0.0;  // us
};

// One-parameter least squares of the flux-noise amplitude a_phi against the
// T2(flux) dephasing profile with a fixed T1 floor.
FitResult fit_t2_vs_flux(const std::vector<FluxT2Observation>& points,
                         const FluxoniumParams& params, const BasisConfig& basis,
                         double t1_floor_us);

struct CpmgPair {
    int n_pulses = 0;
    double t2 = 0.0;  // us
};

struct CpmgTrend {
    double slope = 0.0;      // us per pulse
    double pearson_r = 0.0;
    bool flat = false;       // |r| < 0.5
};

CpmgTrend cpmg_trend(const std::vector<CpmgPair>& pairs);

}  // namespace fluxsim
