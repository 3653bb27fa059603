#include "fluxsim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fluxsim/constants.hpp"
#include "fluxsim/errors.hpp"

namespace fluxsim {

namespace {

// Rotate each column so its largest-magnitude component is real positive;
// makes matrix elements reproducible across solver runs.
void fix_phases(Eigen::MatrixXcd& v) {
    for (int c = 0; c < v.cols(); ++c) {
        int imax = 0;
        double amax = 0.0;
        for (int r = 0; r < v.rows(); ++r) {
            const double a = std::abs(v(r, c));
            if (a > amax) {
                amax = a;
                imax = r;
            }
        }
        if (amax == 0.0) continue;
        const std::complex<double> ph = v(imax, c) / amax;
        v.col(c) *= std::conj(ph);
    }
}

}  // namespace

EigenSolution diagonalize(const OperatorMatrix& h, int n_keep, const OperatorMatrix& n_op) {
    if (n_keep < 1 || n_keep > h.dim) {
        throw std::invalid_argument("diagonalize: n_keep out of range");
    }
    if (h.hermiticity_defect() > 1e-10) {
        throw std::invalid_argument("diagonalize: input operator is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
    if (es.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "diagonalize: eigensolver did not converge (dim=" << h.dim
            << ", fro=" << h.entries.norm() << ", basis=" << h.basis_tag << ")";
        throw NumericalError(msg.str());
    }
    EigenSolution sol;
    sol.energies = es.eigenvalues().head(n_keep);
    Eigen::MatrixXcd v = es.eigenvectors().leftCols(n_keep);
    fix_phases(v);
    sol.states = v;
    sol.n_elems = v.adjoint() * n_op.entries * v;
    sol.basis_tag = h.basis_tag;
    return sol;
}

EigenSolution fluxonium_solution(const FluxoniumParams& params, const BasisConfig& basis) {
    basis.validate();
    const OperatorMatrix h = build_fluxonium_h(params, basis);
    const OscillatorOps ops = build_oscillator_ops(basis, params);
    return diagonalize(h, basis.n_flux_keep, ops.n_hat);
}

EigenSolution transmon_solution(const TransmonParams& params, const BasisConfig& basis) {
    const TransmonOperators ops = build_transmon_h(params, basis);
    return diagonalize(ops.h, std::min(ops.h.dim, 5), ops.n_op);
}

double dispersive_shift(const EigenSolution& sol, double g_mhz, double f_r, int state_j,
                        int n_sum) {
    if (sol.energies.size() < n_sum) {
        throw std::invalid_argument("dispersive_shift: solution has fewer than n_sum levels");
    }
    if (state_j < 0 || state_j >= n_sum) {
        throw std::invalid_argument("dispersive_shift: state index out of range");
    }
    const double g_ghz = g_mhz * 1e-3;
    double sum = 0.0;  // 1/GHz
    for (int k = 0; k < n_sum; ++k) {
        if (k == state_j) continue;
        const double f_jk = sol.energies(state_j) - sol.energies(k);
        if (std::abs(std::abs(f_jk) - f_r) < 1e-6) {  // 1 kHz guard
            std::ostringstream msg;
            msg << "dispersive_shift: f_" << state_j << k << " = " << f_jk
                << " GHz is within 1 kHz of f_r = " << f_r << " GHz, dispersive sum diverges";
            throw NumericalError(msg.str());
        }
        sum += std::norm(sol.n_elems(state_j, k)) * 2.0 * f_jk / (f_jk * f_jk - f_r * f_r);
    }
    return g_ghz * g_ghz * sum * 1e3;  // GHz -> MHz
}

double qubit_chi(const EigenSolution& sol, double g_mhz, double f_r, int n_sum) {
    return std::abs(dispersive_shift(sol, g_mhz, f_r, 0, n_sum)
                    - dispersive_shift(sol, g_mhz, f_r, 1, n_sum));
}

FluxSweep flux_sweep(const FluxoniumParams& params, const BasisConfig& basis,
                     const std::vector<double>& flux_grid, const SweepOptions& opt) {
    if (flux_grid.empty()) throw std::invalid_argument("flux_sweep: empty flux grid");
    for (size_t i = 1; i < flux_grid.size(); ++i) {
        if (!(flux_grid[i] > flux_grid[i - 1])) {
            throw std::invalid_argument("flux_sweep: grid must be strictly increasing");
        }
    }
    FluxSweep sweep;
    sweep.flux_grid = flux_grid;
    sweep.points.reserve(flux_grid.size());
    for (const double flux : flux_grid) {
        FluxPoint pt;
        pt.flux = flux;
        FluxoniumParams p = params;
        p.flux = flux;
        try {
            const EigenSolution sol = fluxonium_solution(p, basis);
            for (const auto& [i, j] : opt.transitions) {
                pt.f[{i, j}] = sol.transition(i, j);
            }
            if (opt.with_chi) {
                pt.chi01_mhz = qubit_chi(sol, opt.g_mhz, opt.f_r, opt.n_sum);
            }
        } catch (const NumericalError& e) {
            pt.flag = e.what();
        }
        sweep.points.push_back(std::move(pt));
    }
    return sweep;
}

namespace {

struct GapEval {
    double gap = 0.0;  // GHz
};

// Gap between the two dressed eigenstates with the largest projection onto
// span{|a>, |b>} in the fluxonium-eigenbasis product space.
double dressed_gap(const FluxoniumParams& params, const BasisConfig& basis,
                   const ResonatorParams& res, double g_ghz, BareState a, BareState b,
                   double flux) {
    FluxoniumParams p = params;
    p.flux = flux;
    const EigenSolution fl = fluxonium_solution(p, basis);
    const OperatorMatrix h = build_coupled_h(fl.energies, fl.n_elems, res, g_ghz, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
    if (es.info() != Eigen::Success) throw NumericalError("dressed_gap: eigensolver failed");
    const int nr = basis.n_res;
    const int ia = a.first * nr + a.second;
    const int ib = b.first * nr + b.second;
    int best = -1, second = -1;
    double pbest = -1.0, psecond = -1.0;
    for (int c = 0; c < es.eigenvectors().cols(); ++c) {
        const double proj = std::norm(es.eigenvectors()(ia, c)) + std::norm(es.eigenvectors()(ib, c));
        if (proj > pbest) {
            second = best;
            psecond = pbest;
            best = c;
            pbest = proj;
        } else if (proj > psecond) {
            second = c;
            psecond = proj;
        }
    }
    return std::abs(es.eigenvalues()(best) - es.eigenvalues()(second));
}

int dressed_index(const Eigen::MatrixXcd& vectors, int bare_index) {
    int best = 0;
    double pbest = -1.0;
    for (int c = 0; c < vectors.cols(); ++c) {
        const double p = std::norm(vectors(bare_index, c));
        if (p > pbest) {
            pbest = p;
            best = c;
        }
    }
    return best;
}

}  // namespace

CrossingResult avoided_crossing(const FluxoniumParams& params, const BasisConfig& basis,
                                const ResonatorParams& res, const CouplingSpec& cpl,
                                BareState state_a, BareState state_b, double flux_lo,
                                double flux_hi) {
    basis.validate();
    if (!(flux_hi > flux_lo)) throw std::invalid_argument("avoided_crossing: empty window");
    if (state_a.first >= basis.n_flux_keep || state_b.first >= basis.n_flux_keep
        || state_a.second >= basis.n_res || state_b.second >= basis.n_res) {
        throw std::invalid_argument("avoided_crossing: bare state outside the basis");
    }
    const double g_ghz = coupling_g_mhz(cpl, params, res) * 1e-3;

    const auto bare_detuning = [&](double flux) {
        FluxoniumParams p = params;
        p.flux = flux;
        const EigenSolution fl = fluxonium_solution(p, basis);
        const double ea = fl.energies(state_a.first) + res.f_r * (state_a.second + 0.5);
        const double eb = fl.energies(state_b.first) + res.f_r * (state_b.second + 0.5);
        return ea - eb;
    };
    if (bare_detuning(flux_lo) * bare_detuning(flux_hi) > 0.0) {
        throw NumericalError("avoided_crossing: window does not bracket a bare-detuning sign "
                             "change, no crossing");
    }

    const auto gap = [&](double flux) {
        return dressed_gap(params, basis, res, g_ghz, state_a, state_b, flux);
    };

    // Golden-section minimization of the dressed gap, tolerance 1e-6 Phi_0.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = flux_lo, hi = flux_hi;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = gap(c), fd = gap(d);
    while (hi - lo > 1e-6) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = gap(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = gap(d);
        }
    }
    double flux_star = 0.5 * (lo + hi);
    double best_gap = gap(flux_star);

    // One parabolic refinement on the squared gap: gap^2 is smooth through the
    // crossing (gap itself is V-shaped when g = 0).
    {
        const double h = std::max(1e-6, (flux_hi - flux_lo) * 1e-4);
        const double g0 = gap(flux_star - h), g1 = best_gap, g2 = gap(flux_star + h);
        const double y0 = g0 * g0, y1 = g1 * g1, y2 = g2 * g2;
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom > 0.0) {
            const double shift = 0.5 * h * (y0 - y2) / denom;
            if (std::abs(shift) < h) {
                const double cand = flux_star + shift;
                const double gc = gap(cand);
                if (gc < best_gap) {
                    flux_star = cand;
                    best_gap = gc;
                }
            }
        }
    }

    FluxoniumParams p = params;
    p.flux = flux_star;
    const EigenSolution fl = fluxonium_solution(p, basis);
    const double n_ab = std::abs(fl.n_elems(state_a.first, state_b.first));

    CrossingResult out;
    out.flux_star = flux_star;
    out.splitting_mhz = best_gap * 1e3;
    out.two_g_n_mhz = 2.0 * g_ghz * n_ab * 1e3;
    return out;
}

Derivative flux_derivative(const FluxoniumParams& params, const BasisConfig& basis, double flux,
                           std::pair<int, int> transition, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("flux_derivative: step must be > 0");
    const auto f_at = [&](double fl) {
        FluxoniumParams p = params;
        p.flux = fl;
        const EigenSolution sol = fluxonium_solution(p, basis);
        return sol.transition(transition.first, transition.second);
    };
    const auto central = [&](double h) {
        return (f_at(flux + h) - f_at(flux - h)) / (2.0 * h);
    };
    const double d_h = central(step);
    const double d_h2 = central(step / 2.0);
    Derivative out;
    out.value = (4.0 * d_h2 - d_h) / 3.0;  // Richardson on the O(h^2) scheme
    out.error_estimate = std::abs(out.value - d_h2);
    return out;
}

double dressed_transition(const FluxoniumParams& params, const BasisConfig& basis,
                          const ResonatorParams& res, double g_ghz, BareState from,
                          BareState to) {
    const EigenSolution fl = fluxonium_solution(params, basis);
    const OperatorMatrix h = build_coupled_h(fl.energies, fl.n_elems, res, g_ghz, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
    if (es.info() != Eigen::Success) {
        throw NumericalError("dressed_transition: eigensolver failed");
    }
    const int nr = basis.n_res;
    const int i_from = dressed_index(es.eigenvectors(), from.first * nr + from.second);
    const int i_to = dressed_index(es.eigenvectors(), to.first * nr + to.second);
    return es.eigenvalues()(i_to) - es.eigenvalues()(i_from);
}

}  // namespace fluxsim
