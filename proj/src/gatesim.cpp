#include "fluxsim/gatesim.hpp"

#include <cmath>
#include <stdexcept>

#include "fluxsim/constants.hpp"
#include "fluxsim/errors.hpp"

namespace fluxsim {

using constants::two_pi;

ThreeLevelSystem truncate_system(const EigenSolution& sol, SystemKind label) {
    if (sol.energies.size() < 3 || sol.n_elems.rows() < 3) {
        throw std::invalid_argument("truncate_system: need at least 3 levels with matrix elements");
    }
    ThreeLevelSystem sys;
    sys.f01 = sol.transition(0, 1);
    sys.f12 = sol.transition(1, 2);
    sys.d01 = sol.n_elems(0, 1);
    sys.d12 = sol.n_elems(1, 2);
    sys.d02 = sol.n_elems(0, 2);
    sys.label = label;
    if (!(sys.f01 > 0.0)) throw std::invalid_argument("truncate_system: f01 must be > 0");
    if (std::abs(sys.d01) == 0.0) {
        throw std::invalid_argument("truncate_system: vanishing d01, system cannot be driven");
    }
    return sys;
}

double envelope(double t_ns, const PulseSpec& spec) {
    if (t_ns < 0.0 || t_ns > spec.t_g) return 0.0;  // pulse off
    return 0.5 * spec.eps * (1.0 - std::cos(two_pi * t_ns / spec.t_g));
}

namespace {

struct StepPlan {
    double dt = 0.0;
    long steps = 0;
};

StepPlan plan_steps(const ThreeLevelSystem& sys, const PulseSpec& spec,
                    const EvolveOptions& opt) {
    if (!(spec.t_g > 0.0)) throw std::invalid_argument("evolve: t_g must be > 0");
    if (!(spec.f_d > 0.0)) throw std::invalid_argument("evolve: f_d must be > 0");
    if (!(spec.eps >= 0.0)) throw std::invalid_argument("evolve: eps must be >= 0");
    const double f_max = std::max(spec.f_d, sys.f01 + sys.f12);
    const double dt0 = 1.0 / (opt.substeps_per_period * f_max);
    const double steps_d = std::ceil(spec.t_g / dt0);
    if (steps_d > 1e8) {
        throw NumericalError(
            "evolve: step policy would need more than 1e8 RK4 steps; shorten the pulse, lower "
            "the frequencies or relax substeps_per_period");
    }
    StepPlan plan;
    plan.steps = static_cast<long>(steps_d);
    plan.dt = spec.t_g / double(plan.steps);
    return plan;
}

// One RK4 pass of i dpsi/dt = 2 pi (H0 + c(t) D) psi on a 3x3 block; the
// "state" may be a vector or the full propagator.
template <typename Mat>
Mat rk4_run(const ThreeLevelSystem& sys, const PulseSpec& spec, const StepPlan& plan, Mat psi) {
    const Eigen::Vector3d diag(0.0, sys.f01, sys.f01 + sys.f12);
    Eigen::Matrix3cd drive;
    drive << 0.0, sys.d01, sys.d02,
             std::conj(sys.d01), 0.0, sys.d12,
             std::conj(sys.d02), std::conj(sys.d12), 0.0;
    const std::complex<double> m2pi_i(0.0, -two_pi);

    const auto rhs = [&](double t, const Mat& y) -> Mat {
        const double c = envelope(t, spec) * std::cos(two_pi * spec.f_d * t + spec.phase);
        Mat out = diag.cast<std::complex<double>>().asDiagonal() * y;
        out.noalias() += c * (drive * y);
        return (m2pi_i * out).eval();
    };

    double t = 0.0;
    const double dt = plan.dt;
    for (long s = 0; s < plan.steps; ++s) {
        const Mat k1 = rhs(t, psi);
        const Mat k2 = rhs(t + 0.5 * dt, psi + (0.5 * dt) * k1);
        const Mat k3 = rhs(t + 0.5 * dt, psi + (0.5 * dt) * k2);
        const Mat k4 = rhs(t + dt, psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    return psi;
}

}  // namespace

GateSimResult evolve(const ThreeLevelSystem& sys, const PulseSpec& spec,
                     const Eigen::Vector3cd& initial, const EvolveOptions& opt) {
    const StepPlan plan = plan_steps(sys, spec, opt);
    const Eigen::Vector3cd psi = rk4_run<Eigen::Vector3cd>(sys, spec, plan, initial);
    GateSimResult res;
    res.p0 = std::norm(psi(0));
    res.p1 = std::norm(psi(1));
    res.p2 = std::norm(psi(2));
    res.stats.dt = plan.dt;
    res.stats.steps = plan.steps;
    res.stats.norm_defect = std::abs(psi.norm() - 1.0);
    return res;
}

GateSimResult evolve(const ThreeLevelSystem& sys, const PulseSpec& spec, int initial_level,
                     const EvolveOptions& opt) {
    if (initial_level < 0 || initial_level > 2) {
        throw std::invalid_argument("evolve: initial level must be 0, 1 or 2");
    }
    Eigen::Vector3cd psi = Eigen::Vector3cd::Zero();
    psi(initial_level) = 1.0;
    return evolve(sys, spec, psi, opt);
}

GateSimResult evolve_checked(const ThreeLevelSystem& sys, const PulseSpec& spec,
                             int initial_level, const EvolveOptions& opt) {
    GateSimResult coarse = evolve(sys, spec, initial_level, opt);
    EvolveOptions fine = opt;
    fine.substeps_per_period *= 2;
    const GateSimResult ref = evolve(sys, spec, initial_level, fine);
    coarse.stats.convergence_estimate =
        std::max({std::abs(coarse.p0 - ref.p0), std::abs(coarse.p1 - ref.p1),
                  std::abs(coarse.p2 - ref.p2)});
    return coarse;
}

Eigen::Matrix3cd pulse_propagator(const ThreeLevelSystem& sys, const PulseSpec& spec,
                                  const EvolveOptions& opt) {
    const StepPlan plan = plan_steps(sys, spec, opt);
    return rk4_run<Eigen::Matrix3cd>(sys, spec, plan, Eigen::Matrix3cd::Identity());
}

double calibrate_amplitude(const ThreeLevelSystem& sys, double t_g, double f_d,
                           const EvolveOptions& opt) {
    if (!(t_g > 0.0)) throw std::invalid_argument("calibrate_amplitude: t_g must be > 0");
    const double drive_freq = f_d > 0.0 ? f_d : sys.f01;
    // eps_max sized so the RWA pulse area 2 pi |d01| eps t_g / 2 reaches 1.5 pi.
    const double eps_max = 1.5 / (std::abs(sys.d01) * t_g);

    const auto p1_at = [&](double eps) {
        return evolve(sys, PulseSpec{eps, t_g, drive_freq, 0.0}, 0, opt).p1;
    };

    constexpr int n_scan = 41;
    std::vector<double> grid(n_scan), p1(n_scan);
    for (int i = 0; i < n_scan; ++i) {
        grid[i] = eps_max * double(i) / double(n_scan - 1);
        p1[i] = p1_at(grid[i]);
    }
    int peak = -1;
    for (int i = 1; i + 1 < n_scan; ++i) {
        if (p1[i] >= p1[i - 1] && p1[i] >= p1[i + 1] && p1[i] >= 0.5) {
            peak = i;
            break;
        }
    }
    if (peak < 0) {
        throw NumericalError("calibrate_amplitude: no interior P1 maximum found in the scan");
    }

    // Golden-section refinement on [grid[peak-1], grid[peak+1]].
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = grid[peak - 1], hi = grid[peak + 1];
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = -p1_at(c), fd = -p1_at(d);
    while (hi - lo > 1e-6 * std::max(1.0, std::abs(hi))) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = -p1_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = -p1_at(d);
        }
    }
    return 0.5 * (lo + hi);
}

GateSimResult calibrated_pulse(const ThreeLevelSystem& sys, double t_g, double f_d,
                               const EvolveOptions& opt) {
    const double drive_freq = f_d > 0.0 ? f_d : sys.f01;
    const double eps_star = calibrate_amplitude(sys, t_g, drive_freq, opt);
    GateSimResult res = evolve(sys, PulseSpec{eps_star, t_g, drive_freq, 0.0}, 0, opt);
    res.eps_star = eps_star;
    res.leakage = res.p2;
    return res;
}

double leakage_error(const ThreeLevelSystem& sys, double t_g, const EvolveOptions& opt) {
    return calibrated_pulse(sys, t_g, -1.0, opt).leakage;
}

std::vector<DurationPoint> error_vs_duration(const ThreeLevelSystem& sys,
                                             const std::vector<double>& t_g_grid,
                                             const EvolveOptions& opt) {
    std::vector<DurationPoint> out;
    out.reserve(t_g_grid.size());
    for (const double t_g : t_g_grid) {
        const GateSimResult r = calibrated_pulse(sys, t_g, -1.0, opt);
        out.push_back({t_g, r.eps_star, r.leakage, r.p1});
    }
    return out;
}

PulseTrainResult simulate_pulse_train(const ThreeLevelSystem& sys, double t_g,
                                      const std::vector<double>& eps_grid,
                                      const std::vector<int>& counts, const EvolveOptions& opt) {
    for (const int k : counts) {
        if (k <= 0 || k % 2 != 0) {
            throw std::invalid_argument("simulate_pulse_train: counts must be positive even");
        }
    }
    const double f_d = sys.f01;
    PulseTrainResult out;
    out.counts = counts;
    out.eps_grid = eps_grid;
    out.p1.assign(counts.size(), std::vector<double>(eps_grid.size(), 0.0));

    // Carrier-frame phase advance over one pulse.
    Eigen::Matrix3cd dz = Eigen::Matrix3cd::Zero();
    dz(0, 0) = 1.0;
    dz(1, 1) = std::exp(std::complex<double>(0.0, two_pi * f_d * t_g));
    dz(2, 2) = std::exp(std::complex<double>(0.0, 2.0 * two_pi * f_d * t_g));

    const Eigen::Vector3cd psi0(1.0, 0.0, 0.0);
    for (size_t ei = 0; ei < eps_grid.size(); ++ei) {
        const Eigen::Matrix3cd u =
            dz * pulse_propagator(sys, PulseSpec{eps_grid[ei], t_g, f_d, 0.0}, opt);
        Eigen::Matrix3cd acc = Eigen::Matrix3cd::Identity();
        int applied = 0;
        // counts are visited in the given order; reuse the accumulated power
        // when the sequence is ascending.
        for (size_t ci = 0; ci < counts.size(); ++ci) {
            const int k = counts[ci];
            if (k < applied) {
                acc = Eigen::Matrix3cd::Identity();
                applied = 0;
            }
            for (; applied < k; ++applied) acc = u * acc;
            out.p1[ci][ei] = std::norm((acc * psi0)(1));
        }
    }
    return out;
}

}  // namespace fluxsim
