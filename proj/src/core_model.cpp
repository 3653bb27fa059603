#include "fluxsim/core_model.hpp"

#include <cmath>
#include <stdexcept>

#include "fluxsim/constants.hpp"
#include "fluxsim/errors.hpp"

namespace fluxsim {

using constants::two_pi;

void FluxoniumParams::validate() const {
    if (!(e_j >= 0.0)) throw std::invalid_argument("FluxoniumParams: e_j must be >= 0");
    if (!(e_l > 0.0)) throw std::invalid_argument("FluxoniumParams: e_l must be > 0");
    if (!(e_c > 0.0)) throw std::invalid_argument("FluxoniumParams: e_c must be > 0");
    if (!std::isfinite(flux)) throw std::invalid_argument("FluxoniumParams: flux must be finite");
}

std::vector<std::string> TransmonParams::validate() const {
    if (!(e_j > 0.0)) throw std::invalid_argument("TransmonParams: e_j must be > 0");
    if (!(e_c > 0.0)) throw std::invalid_argument("TransmonParams: e_c must be > 0");
    std::vector<std::string> warnings;
    if (e_j / e_c < 1.0) {
        warnings.push_back("TransmonParams: e_j/e_c < 1, outside the transmon regime");
    }
    return warnings;
}

void ResonatorParams::validate() const {
    if (!(f_r > 0.0)) throw std::invalid_argument("ResonatorParams: f_r must be > 0");
    if (!(kappa >= 0.0)) throw std::invalid_argument("ResonatorParams: kappa must be >= 0");
    if (l_r && !(*l_r > 0.0)) throw std::invalid_argument("ResonatorParams: l_r must be > 0");
    if (c_r && !(*c_r > 0.0)) throw std::invalid_argument("ResonatorParams: c_r must be > 0");
    if (l_r && c_r) {
        // f = 1/(2 pi sqrt(L C)); L in nH = 1e-9 H, C in fF = 1e-15 F, so
        // sqrt(L_nH * C_fF * 1e-24) s and f in GHz = 1e9 Hz already matches:
        // 1/(2 pi sqrt(L_nH C_fF)) * 1e3 GHz.
        const double f_lc = 1e3 / (two_pi * std::sqrt(*l_r * *c_r));
        if (std::abs(f_lc - f_r) > 0.01 * f_r) {
            throw std::invalid_argument(
                "ResonatorParams: 1/(2 pi sqrt(l_r c_r)) deviates from f_r by more than 1%");
        }
    }
}

void CouplingSpec::validate() const {
    const bool caps = c_qr || c_sigma || c_r;
    if (g_mhz && caps) {
        throw std::invalid_argument("CouplingSpec: give either g_mhz or capacitances, not both");
    }
    if (g_mhz) {
        if (!(*g_mhz >= 0.0)) throw std::invalid_argument("CouplingSpec: g_mhz must be >= 0");
        return;
    }
    if (!(c_qr && c_sigma && c_r)) {
        throw std::invalid_argument("CouplingSpec: capacitive form needs c_qr, c_sigma and c_r");
    }
    if (!(*c_qr >= 0.0) || !(*c_sigma > 0.0) || !(*c_r > 0.0)) {
        throw std::invalid_argument("CouplingSpec: capacitances must be positive");
    }
}

void BasisConfig::validate() const {
    if (n_osc < 2) throw std::invalid_argument("BasisConfig: invalid basis, n_osc must be >= 2");
    if (n_osc < 2 * n_flux_keep) {
        throw std::invalid_argument("BasisConfig: n_osc must be >= 2*n_flux_keep");
    }
    if (n_res < 2) throw std::invalid_argument("BasisConfig: n_res must be >= 2");
    if (n_charge < 10) throw std::invalid_argument("BasisConfig: n_charge must be >= 10");
}

double OperatorMatrix::hermiticity_defect() const {
    const double norm = entries.norm();
    if (norm == 0.0) return 0.0;
    return (entries - entries.adjoint()).norm() / norm;
}

OscillatorOps build_oscillator_ops(const BasisConfig& basis, const FluxoniumParams& params) {
    params.validate();
    if (basis.n_osc < 2) {
        throw std::invalid_argument("build_oscillator_ops: invalid basis, n_osc must be >= 2");
    }
    const int n = basis.n_osc;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) a(k, k + 1) = std::sqrt(double(k + 1));
    const Eigen::MatrixXcd a_dag = a.adjoint();

    const double phi_zpf = std::pow(8.0 * params.e_c / params.e_l, 0.25) / std::sqrt(2.0);
    const double n_zpf = std::pow(params.e_l / (8.0 * params.e_c), 0.25) / std::sqrt(2.0);

    OscillatorOps ops;
    ops.phi_zpf = phi_zpf;
    ops.n_zpf = n_zpf;
    ops.a = {n, a, "osc"};
    ops.a_dag = {n, a_dag, "osc"};
    ops.phi_hat = {n, phi_zpf * (a + a_dag), "osc"};
    ops.n_hat = {n, std::complex<double>(0.0, 1.0) * n_zpf * (a_dag - a), "osc"};
    return ops;
}

OperatorMatrix build_fluxonium_h(const FluxoniumParams& params, const BasisConfig& basis) {
    const OscillatorOps ops = build_oscillator_ops(basis, params);
    const int n = basis.n_osc;

    // phi is real symmetric: diagonalize it, apply the cosine to the
    // eigenvalues, rotate back. Exact within the truncated basis.
    const Eigen::MatrixXd phi_re = ops.phi_hat.entries.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi_re);
    if (es.info() != Eigen::Success) {
        throw NumericalError("build_fluxonium_h: eigensolver failed on phi");
    }
    const Eigen::VectorXd cos_vals =
        (es.eigenvalues().array() - two_pi * params.flux).cos();
    const Eigen::MatrixXd cos_phi =
        es.eigenvectors() * cos_vals.asDiagonal() * es.eigenvectors().transpose();

    Eigen::MatrixXcd h =
        4.0 * params.e_c * (ops.n_hat.entries * ops.n_hat.entries)
        + 0.5 * params.e_l * (ops.phi_hat.entries * ops.phi_hat.entries)
        - params.e_j * cos_phi.cast<std::complex<double>>();
    return {n, std::move(h), "osc"};
}

TransmonOperators build_transmon_h(const TransmonParams& params, const BasisConfig& basis) {
    params.validate();
    basis.validate();
    const int half = basis.n_charge;
    const int dim = 2 * half + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd n_op = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double n = double(i - half) - params.n_g;
        h(i, i) = 4.0 * params.e_c * n * n;
        n_op(i, i) = n;
        if (i + 1 < dim) {
            h(i, i + 1) = -0.5 * params.e_j;
            h(i + 1, i) = -0.5 * params.e_j;
        }
    }
    return {{dim, std::move(h), "charge"}, {dim, std::move(n_op), "charge"}};
}

OperatorMatrix build_coupled_h(const Eigen::VectorXd& flux_energies,
                               const Eigen::MatrixXcd& n_elems,
                               const ResonatorParams& res, double g_ghz,
                               const BasisConfig& basis) {
    res.validate();
    const int nq = basis.n_flux_keep;
    const int nr = basis.n_res;
    if (flux_energies.size() < nq || n_elems.rows() < nq || n_elems.cols() < nq) {
        throw std::invalid_argument(
            "build_coupled_h: incomplete solution, need >= n_flux_keep energies and charge "
            "matrix elements");
    }
    const int dim = nq * nr;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    // Product-space index (j, k) -> j*n_res + k.
    for (int j = 0; j < nq; ++j) {
        for (int k = 0; k < nr; ++k) {
            h(j * nr + k, j * nr + k) = flux_energies(j) + res.f_r * (k + 0.5);
        }
    }
    for (int j = 0; j < nq; ++j) {
        for (int jp = 0; jp < nq; ++jp) {
            const std::complex<double> nel = n_elems(j, jp);
            if (nel == std::complex<double>(0.0, 0.0)) continue;
            for (int k = 0; k + 1 < nr; ++k) {
                const double amp = std::sqrt(double(k + 1));
                h(j * nr + k, jp * nr + k + 1) += -g_ghz * nel * amp;  // a
                h(j * nr + k + 1, jp * nr + k) += -g_ghz * nel * amp;  // a^dag
            }
        }
    }
    return {dim, std::move(h), "fluxeig(x)fock"};
}

double g_from_capacitance(const CouplingSpec& cpl, const FluxoniumParams& fl,
                          const ResonatorParams& res, std::vector<std::string>* warnings) {
    cpl.validate();
    fl.validate();
    if (!cpl.capacitive()) {
        throw std::invalid_argument("g_from_capacitance: CouplingSpec holds no capacitances");
    }
    if (!res.l_r) {
        throw std::invalid_argument("g_from_capacitance: resonator l_r required");
    }
    if (!(*cpl.c_qr >= 0.0) || !(*cpl.c_sigma > 0.0) || !(*cpl.c_r > 0.0) || !(*res.l_r > 0.0)) {
        throw std::domain_error("g_from_capacitance: nonpositive capacitance or inductance");
    }

    // SI conversion: fF -> F, nH -> H.
    const double c_qr = *cpl.c_qr * 1e-15;
    const double c_sigma = *cpl.c_sigma * 1e-15;
    const double c_r = *cpl.c_r * 1e-15;
    const double l_r = *res.l_r * 1e-9;

    // zeta_q = (R_q/2pi) sqrt(8 E_C/(E_L+E_J)); the energy ratio is
    // dimensionless so GHz values enter directly. Ohm.
    const double zeta_q = constants::resistance_quantum / two_pi
                          * std::sqrt(8.0 * fl.e_c / (fl.e_l + fl.e_j));
    // zeta_r = sqrt(L_r/C_r), Ohm.
    const double zeta_r = std::sqrt(l_r / c_r);

    // g (angular, rad/s) = (1/2) (C_qr/(C_Sigma C_r)) / sqrt(zeta_q zeta_r);
    // 1/(F * Ohm) = 1/s. Convert to g/2pi in MHz.
    const double g_rad_s = 0.5 * c_qr / (c_sigma * c_r) / std::sqrt(zeta_q * zeta_r);
    const double g_mhz = g_rad_s / two_pi / 1e6;

    if (warnings) {
        // C_Sigma = e^2 / (2 E_C) with E_C in J: consistency with the quoted e_c.
        const double e_c_from_csigma = constants::elementary_charge * constants::elementary_charge
                                       / (2.0 * c_sigma) / constants::planck_h / 1e9;  // GHz
        if (std::abs(e_c_from_csigma - fl.e_c) > 0.05 * fl.e_c) {
            warnings->push_back("g_from_capacitance: c_sigma implies e_c = "
                                + std::to_string(e_c_from_csigma)
                                + " GHz, inconsistent with params (>5%)");
        }
    }
    return g_mhz;
}

double coupling_g_mhz(const CouplingSpec& cpl, const FluxoniumParams& fl,
                      const ResonatorParams& res, std::vector<std::string>* warnings) {
    cpl.validate();
    if (cpl.g_mhz) return *cpl.g_mhz;
    return g_from_capacitance(cpl, fl, res, warnings);
}

}  // namespace fluxsim
