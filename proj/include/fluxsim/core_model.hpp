#pragma once

// Circuit parameter types and operator/Hamiltonian builders for fluxonium,
// transmon, linear resonator and the capacitively coupled system. All
// Hamiltonians are returned as H/h in GHz.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fluxsim {

struct FluxoniumParams {
    double e_j = 0.0;   // Josephson energy E_J/h, GHz
    double e_l = 0.0;   // inductive energy E_L/h, GHz
    double e_c = 0.0;   // charging energy E_C/h, GHz
    double flux = 0.5;  // external flux Phi_ext/Phi_0

    // Throws std::invalid_argument on violation. e_j = 0 is allowed (harmonic
    // limit); the spectrum is periodic in flux with period 1.
    void validate() const;
};

struct TransmonParams {
    double e_j = 0.0;  // E_J/h, GHz
    double e_c = 0.0;  // E_C/h, GHz
    double n_g = 0.0;  // offset charge, Cooper pairs

    // Returns warnings (e.g. e_j/e_c < 1, outside the transmon regime);
    // throws on hard violations.
    std::vector<std::string> validate() const;
};

struct ResonatorParams {
    double f_r = 0.0;    // fundamental frequency omega_r/2pi, GHz
    double kappa = 0.0;  // linewidth kappa/2pi, MHz
    std::optional<double> l_r;  // lumped inductance, nH
    std::optional<double> c_r;  // lumped capacitance, fF

    void validate() const;
};

// Either a direct coupling rate or the capacitance set it derives from.
struct CouplingSpec {
    std::optional<double> g_mhz;     // g/2pi, MHz
    std::optional<double> c_qr;      // fluxonium-resonator capacitance, fF
    std::optional<double> c_sigma;   // total fluxonium shunt capacitance, fF
    std::optional<double> c_r;       // resonator capacitance, fF

    void validate() const;  // exactly one representation populated
    bool capacitive() const { return !g_mhz.has_value(); }
};

struct BasisConfig {
    int n_osc = 60;        // oscillator-basis dimension for fluxonium
    int n_flux_keep = 25;  // fluxonium eigenlevels retained
    int n_res = 5;         // resonator levels
    int n_charge = 30;     // charge-basis half-width for the transmon

    void validate() const;  // n_osc >= 2*n_flux_keep, n_res >= 2, n_charge >= 10
};

struct OperatorMatrix {
    int dim = 0;
    Eigen::MatrixXcd entries;
    std::string basis_tag;

    // Relative Frobenius deviation from Hermiticity, ||M - M^dag||_F / ||M||_F.
    double hermiticity_defect() const;
};

struct OscillatorOps {
    OperatorMatrix n_hat;   // charge operator, Cooper pairs
    OperatorMatrix phi_hat; // phase operator
    OperatorMatrix a;       // annihilation
    OperatorMatrix a_dag;   // creation
    double phi_zpf = 0.0;
    double n_zpf = 0.0;
};

// phi = phi_zpf (a + a^dag), n = i n_zpf (a^dag - a), with
// phi_zpf = (8 e_c/e_l)^(1/4)/sqrt(2) and n_zpf = (e_l/(8 e_c))^(1/4)/sqrt(2).
OscillatorOps build_oscillator_ops(const BasisConfig& basis, const FluxoniumParams& params);

// H/h = 4 E_C n^2 + (1/2) E_L phi^2 - E_J cos(phi - 2 pi flux), GHz, in the
// LC oscillator basis. The cosine is evaluated exactly through the spectral
// decomposition of phi.
OperatorMatrix build_fluxonium_h(const FluxoniumParams& params, const BasisConfig& basis);

struct TransmonOperators {
    OperatorMatrix h;     // charge-basis Hamiltonian, GHz
    OperatorMatrix n_op;  // charge operator diag(n - n_g), for drive coupling
};

// Charge basis {|n> : -n_charge..+n_charge}: diagonal 4 E_C (n - n_g)^2,
// -E_J/2 on the first sub/superdiagonals.
TransmonOperators build_transmon_h(const TransmonParams& params, const BasisConfig& basis);

// Coupled fluxonium-resonator Hamiltonian on the (n_flux_keep x n_res) product
// space: diag(E_j) (x) I + I (x) f_r (a^dag a + 1/2) - g n_eig (x) (a^dag + a),
// with g in GHz and n_eig the charge operator in the fluxonium eigenbasis.
OperatorMatrix build_coupled_h(const Eigen::VectorXd& flux_energies,
                               const Eigen::MatrixXcd& n_elems,
                               const ResonatorParams& res, double g_ghz,
                               const BasisConfig& basis);

// Capacitance-network route: g/2pi in MHz,
//   g = (1/2) (C_qr / (C_Sigma C_r)) / sqrt(zeta_q zeta_r)
// with zeta_q = (R_q/2pi) sqrt(8 E_C/(E_L+E_J)) and zeta_r = sqrt(L_r/C_r).
// Appends a warning if c_sigma is inconsistent with e_c (C_Sigma = e^2/2E_C)
// by more than 5%.
double g_from_capacitance(const CouplingSpec& cpl, const FluxoniumParams& fl,
                          const ResonatorParams& res,
                          std::vector<std::string>* warnings = nullptr);

// Resolve a CouplingSpec to g/2pi in MHz whichever representation it holds.
double coupling_g_mhz(const CouplingSpec& cpl, const FluxoniumParams& fl,
                      const ResonatorParams& res,
                      std::vector<std::string>* warnings = nullptr);

}  // namespace fluxsim
