#include "fluxsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "fluxsim/constants.hpp"
#include "fluxsim/decoherence.hpp"
#include "fluxsim/errors.hpp"
#include "fluxsim/rng.hpp"
#include "fluxsim/spectra.hpp"

namespace fluxsim {

using constants::two_pi;

void DecayTrace::validate() const {
    if (t.size() != y.size() || (!sigma.empty() && sigma.size() != t.size())) {
        throw std::invalid_argument("DecayTrace: t, y (and sigma) must have equal lengths");
    }
    if (t.size() < 5) throw std::invalid_argument("DecayTrace: need at least 5 points");
    for (size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) {
            throw std::invalid_argument("DecayTrace: t must be strictly increasing");
        }
    }
}

void RBDataset::validate() const {
    if (m.size() != f.size()) throw std::invalid_argument("RBDataset: m and f lengths differ");
    if (m.empty()) throw std::invalid_argument("RBDataset: empty dataset");
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] <= 0) throw std::invalid_argument("RBDataset: m must be positive");
        if (i > 0 && m[i] <= m[i - 1]) {
            throw std::invalid_argument("RBDataset: m must be strictly increasing");
        }
        if (!std::isfinite(f[i])) throw std::invalid_argument("RBDataset: fidelities must be finite");
    }
}

void FrequencyScan::validate() const {
    if (f.size() != y.size()) throw std::invalid_argument("FrequencyScan: lengths differ");
    if (f.size() < 7) throw std::invalid_argument("FrequencyScan: need at least 7 points");
    for (size_t i = 1; i < f.size(); ++i) {
        if (!(f[i] > f[i - 1])) {
            throw std::invalid_argument("FrequencyScan: f must be strictly increasing");
        }
    }
}

LmOutcome lm_fit(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                 Eigen::VectorXd x0, const LmOptions& opt) {
    const int p = int(x0.size());
    LmOutcome out;
    out.x = x0;

    Eigen::VectorXd r = residual(out.x);
    const int n = int(r.size());
    double sse = r.squaredNorm();

    const double x_floor = 1e-8 * std::max(1.0, out.x.cwiseAbs().maxCoeff());
    // Central differences: the O(h^2) truncation keeps the gradient accurate
    // enough to meet the 1e-10 tolerance near the optimum.
    const auto jacobian = [&](const Eigen::VectorXd& x) {
        Eigen::MatrixXd j(n, p);
        for (int c = 0; c < p; ++c) {
            const double h = opt.fd_step * std::max(std::abs(x(c)), x_floor);
            Eigen::VectorXd xp = x, xm = x;
            xp(c) += h;
            xm(c) -= h;
            j.col(c) = (residual(xp) - residual(xm)) / (2.0 * h);
        }
        return j;
    };

    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    Eigen::MatrixXd j = jacobian(out.x);
    for (; iter < opt.max_iter; ++iter) {
        const Eigen::VectorXd g = j.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() <= opt.grad_tol * std::max(1.0, sse)) {
            converged = true;
            break;
        }
        const Eigen::MatrixXd jtj = j.transpose() * j;
        bool stepped = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd damped = jtj;
            for (int d = 0; d < p; ++d) {
                damped(d, d) += lambda * std::max(jtj(d, d), 1e-300);
            }
            const Eigen::VectorXd delta = damped.ldlt().solve(-g);
            if (!delta.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd x_new = out.x + delta;
            const Eigen::VectorXd r_new = residual(x_new);
            const double sse_new = r_new.squaredNorm();
            if (sse_new < sse) {
                double rel_step = 0.0;
                for (int d = 0; d < p; ++d) {
                    rel_step = std::max(rel_step,
                                        std::abs(delta(d)) / std::max(std::abs(out.x(d)), x_floor));
                }
                const double improvement = sse - sse_new;
                out.x = x_new;
                r = r_new;
                sse = sse_new;
                lambda = std::max(lambda * 0.1, 1e-12);
                stepped = true;
                if (rel_step < 1e-13 || improvement <= 1e-14 * std::max(sse, 1e-300)) {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (converged) break;
        if (!stepped) {
            // No downhill step at any damping: we are at the numerical floor
            // of this least-squares surface.
            converged = true;
            break;
        }
        j = jacobian(out.x);
    }

    out.converged = converged;
    out.n_iter = iter;
    out.residual_rms = std::sqrt(sse / std::max(1, n));

    // Standard errors from the Gauss-Newton covariance at the solution.
    j = jacobian(out.x);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const double s2 = n > p ? sse / double(n - p) : 0.0;
    const Eigen::MatrixXd cov =
        s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
    out.stderrs = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    return out;
}

namespace {

FitResult pack(const LmOutcome& lm, const std::vector<std::string>& names) {
    FitResult res;
    for (size_t i = 0; i < names.size(); ++i) {
        res.params[names[i]] = lm.x(Eigen::Index(i));
        res.stderrs[names[i]] = lm.stderrs(Eigen::Index(i));
    }
    res.residual_rms = lm.residual_rms;
    res.converged = lm.converged;
    res.n_iter = lm.n_iter;
    return res;
}

Eigen::VectorXd weights_of(const DecayTrace& trace) {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(Eigen::Index(trace.t.size()));
    if (!trace.sigma.empty()) {
        for (size_t i = 0; i < trace.sigma.size(); ++i) {
            w(Eigen::Index(i)) = trace.sigma[i] > 0.0 ? 1.0 / trace.sigma[i] : 1.0;
        }
    }
    return w;
}

struct DecayInit {
    double a = 0.0;
    double b = 0.0;
    double t_scale = 0.0;
};

DecayInit decay_init(const DecayTrace& trace) {
    const size_t n = trace.t.size();
    DecayInit init;
    const size_t tail = std::max<size_t>(1, n / 4);
    init.b = std::accumulate(trace.y.end() - long(tail), trace.y.end(), 0.0) / double(tail);
    init.a = trace.y.front() - init.b;
    const double span = trace.t.back() - trace.t.front();
    init.t_scale = span / 3.0;
    const double target = std::abs(init.a) / std::exp(1.0);
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(trace.y[i] - init.b) <= target) {
            const double dt = trace.t[i] - trace.t.front();
            if (dt > 0.0) init.t_scale = dt;
            break;
        }
    }
    if (!(init.t_scale > 0.0)) init.t_scale = span / 3.0;
    return init;
}

}  // namespace

FitResult fit_exponential(const DecayTrace& trace) {
    trace.validate();
    const DecayInit init = decay_init(trace);
    const Eigen::VectorXd w = weights_of(trace);
    const double t0 = trace.t.front();
    const auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(Eigen::Index(trace.t.size()));
        for (size_t i = 0; i < trace.t.size(); ++i) {
            const double model = x(0) * std::exp(-(trace.t[i] - t0) / x(2)) + x(1);
            r(Eigen::Index(i)) = w(Eigen::Index(i)) * (model - trace.y[i]);
        }
        return r;
    };
    Eigen::VectorXd x0(3);
    x0 << init.a, init.b, init.t_scale;
    LmOutcome lm = lm_fit(residual, x0);
    if (!(lm.x(2) > 0.0) || !std::isfinite(lm.x(2))) lm.converged = false;
    FitResult res = pack(lm, {"A", "B", "T"});
    return res;
}

FitResult fit_gaussian_decay(const DecayTrace& trace) {
    trace.validate();
    const DecayInit init = decay_init(trace);
    const Eigen::VectorXd w = weights_of(trace);
    const double t0 = trace.t.front();
    const auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(Eigen::Index(trace.t.size()));
        for (size_t i = 0; i < trace.t.size(); ++i) {
            const double u = (trace.t[i] - t0) / x(2);
            const double model = x(0) * std::exp(-u * u) + x(1);
            r(Eigen::Index(i)) = w(Eigen::Index(i)) * (model - trace.y[i]);
        }
        return r;
    };
    Eigen::VectorXd x0(3);
    x0 << init.a, init.b, init.t_scale;
    LmOutcome lm = lm_fit(residual, x0);
    if (!(lm.x(2) > 0.0) || !std::isfinite(lm.x(2))) lm.converged = false;
    return pack(lm, {"A", "B", "T"});
}

FitResult fit_damped_cosine(const DecayTrace& trace) {
    trace.validate();
    const size_t n = trace.t.size();
    if (n < 8) throw std::invalid_argument("fit_damped_cosine: need at least 8 points");

    const double mean_y = std::accumulate(trace.y.begin(), trace.y.end(), 0.0) / double(n);
    std::vector<double> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = trace.y[i] - mean_y;

    // Discrete spectral peak of the detrended trace.
    const double span = trace.t.back() - trace.t.front();
    const int n_freq = int(n) / 2;
    double best_power = 0.0, mean_power = 0.0, f_init = 0.0;
    std::complex<double> best_coef;
    for (int k = 1; k <= n_freq; ++k) {
        const double f = double(k) / span;
        std::complex<double> coef(0.0, 0.0);
        for (size_t i = 0; i < n; ++i) {
            coef += z[i] * std::exp(std::complex<double>(0.0, -two_pi * f * trace.t[i]));
        }
        const double power = std::norm(coef);
        mean_power += power;
        if (power > best_power) {
            best_power = power;
            f_init = f;
            best_coef = coef;
        }
    }
    mean_power /= double(n_freq);
    if (best_power <= 2.0 * mean_power || f_init <= 0.0) {
        FitResult res;
        res.converged = false;
        res.params = {{"A", 0.0}, {"B", mean_y}, {"T", 0.0}, {"f", 0.0}, {"phi", 0.0}};
        return res;
    }

    const auto [zmin, zmax] = std::minmax_element(z.begin(), z.end());
    const Eigen::VectorXd w = weights_of(trace);
    const auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(Eigen::Index(n));
        for (size_t i = 0; i < n; ++i) {
            const double model =
                x(0) * std::exp(-trace.t[i] / x(2)) * std::cos(two_pi * x(3) * trace.t[i] + x(4))
                + x(1);
            r(Eigen::Index(i)) = w(Eigen::Index(i)) * (model - trace.y[i]);
        }
        return r;
    };
    Eigen::VectorXd x0(5);
    x0 << (*zmax - *zmin) / 2.0, mean_y, span / 2.0, f_init, std::arg(best_coef);
    LmOutcome lm = lm_fit(residual, x0);
    if (!(lm.x(2) > 0.0) || !std::isfinite(lm.x(2))) lm.converged = false;

    // Normalize: A >= 0, f >= 0, phi in (-pi, pi].
    if (lm.x(0) < 0.0) {
        lm.x(0) = -lm.x(0);
        lm.x(4) += constants::pi;
    }
    if (lm.x(3) < 0.0) {
        lm.x(3) = -lm.x(3);
        lm.x(4) = -lm.x(4);
    }
    lm.x(4) = std::remainder(lm.x(4), two_pi);
    return pack(lm, {"A", "B", "T", "f", "phi"});
}

FitResult fit_lorentzian(const FrequencyScan& scan) {
    scan.validate();
    const size_t n = scan.f.size();
    std::vector<double> sorted_y = scan.y;
    std::nth_element(sorted_y.begin(), sorted_y.begin() + long(n / 2), sorted_y.end());
    const double offset0 = sorted_y[n / 2];

    size_t i_star = 0;
    double dev = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(scan.y[i] - offset0) > dev) {
            dev = std::abs(scan.y[i] - offset0);
            i_star = i;
        }
    }
    const double depth0 = scan.y[i_star] - offset0;
    // Half-maximum width around the extremum.
    double f_lo = scan.f.front(), f_hi = scan.f.back();
    for (size_t i = i_star; i-- > 0;) {
        if (std::abs(scan.y[i] - offset0) < dev / 2.0) {
            f_lo = scan.f[i];
            break;
        }
    }
    for (size_t i = i_star + 1; i < n; ++i) {
        if (std::abs(scan.y[i] - offset0) < dev / 2.0) {
            f_hi = scan.f[i];
            break;
        }
    }
    double fwhm0 = f_hi - f_lo;
    if (!(fwhm0 > 0.0)) fwhm0 = (scan.f.back() - scan.f.front()) / 4.0;

    const auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(Eigen::Index(n));
        for (size_t i = 0; i < n; ++i) {
            const double hw = 0.5 * x(1);
            const double d = scan.f[i] - x(0);
            const double model = x(3) + x(2) * hw * hw / (d * d + hw * hw);
            r(Eigen::Index(i)) = model - scan.y[i];
        }
        return r;
    };
    Eigen::VectorXd x0(4);
    x0 << scan.f[i_star], fwhm0, depth0, offset0;
    LmOutcome lm = lm_fit(residual, x0);
    lm.x(1) = std::abs(lm.x(1));  // fwhm enters squared
    return pack(lm, {"f0", "fwhm", "depth", "offset"});
}

double chi_from_scans(const FrequencyScan& ground, const FrequencyScan& excited) {
    const FitResult a = fit_lorentzian(ground);
    const FitResult b = fit_lorentzian(excited);
    if (!a.converged || !b.converged) {
        throw NumericalError("chi_from_scans: Lorentzian fit did not converge");
    }
    return std::abs(a.params.at("f0") - b.params.at("f0"));
}

FitResult fit_rb(const RBDataset& data) {
    data.validate();
    const size_t n = data.m.size();
    if (n < 4) throw std::invalid_argument("fit_rb: need at least 4 distinct sequence lengths");

    double a0 = data.f.back();
    double b0 = data.f.front() - a0;
    double p0 = 0.999;
    if (std::abs(b0) > 1e-12) {
        const size_t mid = n / 2;
        const double frac = (data.f[mid] - a0) / b0;
        if (frac > 0.0 && frac < 1.0) {
            p0 = std::pow(frac, 1.0 / double(data.m[mid]));
        }
    }
    p0 = std::clamp(p0, 1e-6, 1.0 - 1e-12);

    const auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(Eigen::Index(n));
        for (size_t i = 0; i < n; ++i) {
            r(Eigen::Index(i)) = x(0) + x(1) * std::pow(x(2), double(data.m[i])) - data.f[i];
        }
        return r;
    };
    Eigen::VectorXd x0(3);
    x0 << a0, b0, p0;
    LmOutcome lm = lm_fit(residual, x0);
    FitResult res = pack(lm, {"A", "B", "p"});
    const double p = res.params["p"];
    if (!(p > 0.0 && p < 1.0)) res.converged = false;
    // Flat data: B collapses to zero and p is unidentified (errorless edge).
    double f_scale = 0.0;
    for (const double v : data.f) f_scale = std::max(f_scale, std::abs(v));
    if (std::abs(res.params["B"]) < 1e-8 * std::max(1.0, f_scale)) res.converged = false;

    const double r_cliff = (1.0 - p) / 2.0;
    const double r_g = r_cliff / 1.833;  // identity gate not counted
    res.params["r_cliff"] = r_cliff;
    res.params["f_cliff"] = 1.0 - r_cliff;
    res.params["r_g"] = r_g;
    res.params["f_g"] = 1.0 - r_g;
    const double p_err = res.stderrs["p"];
    res.stderrs["r_cliff"] = p_err / 2.0;
    res.stderrs["f_cliff"] = p_err / 2.0;
    res.stderrs["r_g"] = p_err / 2.0 / 1.833;
    res.stderrs["f_g"] = p_err / 2.0 / 1.833;
    return res;
}

RBDataset synth_rb(double p, double a, double b, const std::vector<int>& m_list, double sigma,
                   int n_rand, std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("synth_rb: p must be in (0, 1]");
    if (n_rand < 1) throw std::invalid_argument("synth_rb: n_rand must be >= 1");
    if (!(sigma >= 0.0)) throw std::invalid_argument("synth_rb: sigma must be >= 0");
    const CounterRng rng(seed);
    RBDataset data;
    data.m = m_list;
    data.n_rand = n_rand;
    data.f.reserve(m_list.size());
    for (size_t i = 0; i < m_list.size(); ++i) {
        const double model = a + b * std::pow(p, double(m_list[i]));
        double acc = 0.0;
        for (int r = 0; r < n_rand; ++r) {
            acc += model + sigma * rng.gaussian(std::uint64_t(i) * std::uint64_t(n_rand)
                                                + std::uint64_t(r));
        }
        data.f.push_back(acc / double(n_rand));
    }
    data.validate();
    return data;
}

FitResult fit_hamiltonian(const std::vector<SpectroscopyPoint>& points,
                          const HamiltonianGuess& guess, bool fit_resonator,
                          const BasisConfig& basis) {
    basis.validate();
    const size_t n_free = fit_resonator ? 5 : 3;
    if (points.size() < n_free) {
        throw std::invalid_argument("fit_hamiltonian: need at least as many points as parameters");
    }

    const auto model = [&](const Eigen::VectorXd& x) {
        const double e_j = x(0), e_l = x(1), e_c = x(2);
        const double f_r = fit_resonator ? x(3) : guess.f_r;
        const double g = std::abs(fit_resonator ? x(4) : guess.g_ghz);
        const FluxoniumParams fl{e_j, e_l, e_c, 0.5};
        const ResonatorParams res{f_r, 0.0, std::nullopt, std::nullopt};

        Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index(points.size()));
        double cached_flux = std::numeric_limits<double>::quiet_NaN();
        double f01 = 0.0, f02 = 0.0, fres = 0.0;
        for (size_t i = 0; i < points.size(); ++i) {
            const auto& pt = points[i];
            if (pt.flux != cached_flux) {
                FluxoniumParams at = fl;
                at.flux = pt.flux;
                const EigenSolution sol = fluxonium_solution(at, basis);
                const OperatorMatrix h = build_coupled_h(sol.energies, sol.n_elems, res, g, basis);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
                if (es.info() != Eigen::Success) {
                    throw NumericalError("fit_hamiltonian: coupled eigensolver failed");
                }
                const int nr = basis.n_res;
                const auto idx = [&](int bare) {
                    int best = 0;
                    double pb = -1.0;
                    for (int c = 0; c < es.eigenvectors().cols(); ++c) {
                        const double pr = std::norm(es.eigenvectors()(bare, c));
                        if (pr > pb) {
                            pb = pr;
                            best = c;
                        }
                    }
                    return best;
                };
                const double e00 = es.eigenvalues()(idx(0));
                f01 = es.eigenvalues()(idx(1 * nr)) - e00;
                f02 = es.eigenvalues()(idx(2 * nr)) - e00;
                fres = es.eigenvalues()(idx(1)) - e00;
                cached_flux = pt.flux;
            }
            switch (pt.label) {
                case TransitionLabel::f01: out(Eigen::Index(i)) = f01; break;
                case TransitionLabel::f02: out(Eigen::Index(i)) = f02; break;
                case TransitionLabel::resonator: out(Eigen::Index(i)) = fres; break;
            }
        }
        return out;
    };

    const auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r = model(x);
        for (size_t i = 0; i < points.size(); ++i) r(Eigen::Index(i)) -= points[i].f_ghz;
        return r;
    };

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(Eigen::Index(n_free));
    x0(0) = guess.e_j;
    x0(1) = guess.e_l;
    x0(2) = guess.e_c;
    if (fit_resonator) {
        x0(3) = guess.f_r;
        x0(4) = guess.g_ghz;
    }
    LmOutcome lm = lm_fit(residual, x0, LmOptions{200, 1e-10, 1e-7});
    if (fit_resonator) lm.x(4) = std::abs(lm.x(4));
    FitResult res = pack(lm, fit_resonator
                                 ? std::vector<std::string>{"e_j", "e_l", "e_c", "f_r", "g"}
                                 : std::vector<std::string>{"e_j", "e_l", "e_c"});
    if (!fit_resonator) {
        res.params["f_r"] = guess.f_r;
        res.params["g"] = std::abs(guess.g_ghz);
        res.stderrs["f_r"] = 0.0;
        res.stderrs["g"] = 0.0;
    }
    return res;
}

FitResult fit_t2_vs_flux(const std::vector<FluxT2Observation>& points,
                         const FluxoniumParams& params, const BasisConfig& basis,
                         double t1_floor_us) {
    if (!(t1_floor_us > 0.0)) throw std::invalid_argument("fit_t2_vs_flux: t1_floor must be > 0");
    if (points.size() < 3) throw std::invalid_argument("fit_t2_vs_flux: need at least 3 points");

    // Gamma_Phi = a_phi * c_i with c_i fixed by the slope at each flux point.
    std::vector<double> c(points.size());
    int off_sweet = 0;
    for (size_t i = 0; i < points.size(); ++i) {
        const Derivative d = flux_derivative(params, basis, points[i].flux, {0, 1});
        c[i] = flux_noise_rate(1.0, d.value);
        if (c[i] > 1e-10) ++off_sweet;
    }
    if (off_sweet < 3) {
        throw std::invalid_argument(
            "fit_t2_vs_flux: unidentifiable, need at least 3 off-sweet-spot points");
    }

    const double gamma_floor = 1.0 / (2.0 * t1_floor_us);
    double a0 = 1.0;
    {
        std::vector<double> est;
        for (size_t i = 0; i < points.size(); ++i) {
            if (c[i] > 1e-10 && points[i].t2 > 0.0) {
                const double g = 1.0 / points[i].t2 - gamma_floor;
                if (g > 0.0) est.push_back(g / c[i]);
            }
        }
        if (!est.empty()) {
            std::nth_element(est.begin(), est.begin() + long(est.size() / 2), est.end());
            a0 = est[est.size() / 2];
        }
    }

    const auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(Eigen::Index(points.size()));
        for (size_t i = 0; i < points.size(); ++i) {
            const double model = 1.0 / (gamma_floor + std::abs(x(0)) * c[i]);
            r(Eigen::Index(i)) = model - points[i].t2;
        }
        return r;
    };
    Eigen::VectorXd x0(1);
    x0 << a0;
    LmOutcome lm = lm_fit(residual, x0);
    lm.x(0) = std::abs(lm.x(0));
    return pack(lm, {"a_phi"});
}

CpmgTrend cpmg_trend(const std::vector<CpmgPair>& pairs) {
    if (pairs.size() < 3) throw std::invalid_argument("cpmg_trend: need at least 3 pairs");
    for (const auto& p : pairs) {
        if (p.n_pulses < 1 || p.n_pulses > 11) {
            throw std::invalid_argument("cpmg_trend: N must be in [1, 11]");
        }
    }
    const double n = double(pairs.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pairs) {
        sx += p.n_pulses;
        sy += p.t2;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : pairs) {
        sxx += (p.n_pulses - mx) * (p.n_pulses - mx);
        syy += (p.t2 - my) * (p.t2 - my);
        sxy += (p.n_pulses - mx) * (p.t2 - my);
    }
    CpmgTrend trend;
    trend.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    trend.pearson_r = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    trend.flat = std::abs(trend.pearson_r) < 0.5;
    return trend;
}

}  // namespace fluxsim
