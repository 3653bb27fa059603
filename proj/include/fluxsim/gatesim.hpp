#pragma once

// Time-domain simulation of cosine-envelope pulses on three-level truncations.
// Lab frame, no rotating-wave approximation; fixed-step RK4. Time in ns.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fluxsim/spectra.hpp"

namespace fluxsim {

enum class SystemKind { fluxonium, transmon };

struct ThreeLevelSystem {
    double f01 = 0.0;  // GHz
    double f12 = 0.0;  // GHz
    std::complex<double> d01, d12, d02;  // charge matrix elements, Cooper pairs
    SystemKind label = SystemKind::fluxonium;
};

struct PulseSpec {
    double eps = 0.0;    // drive amplitude, GHz (energy/h scale on the envelope)
    double t_g = 0.0;    // total gate duration, ns
    double f_d = 0.0;    // drive frequency, GHz
    double phase = 0.0;  // carrier phase, rad
};

struct IntegratorStats {
    double dt = 0.0;
    long steps = 0;
    double norm_defect = 0.0;            // | ||psi|| - 1 | at t_g
    double convergence_estimate = 0.0;   // filled by evolve_checked
};

struct GateSimResult {
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;  // populations at t_g
    double eps_star = 0.0;                // calibrated amplitude (when calibrated)
    double leakage = 0.0;                 // P2 at eps_star
    IntegratorStats stats;
};

struct EvolveOptions {
    // dt = 1 / (substeps_per_period * max(f_d, f01 + f12)); 800 keeps the norm
    // drift under 1e-10 over a 6 ns pulse (the 200-substep ceiling is the
    // contract minimum).
    int substeps_per_period = 800;
};

// Lowest three eigenstates of a diagonalized system.
ThreeLevelSystem truncate_system(const EigenSolution& sol, SystemKind label);

// Cosine envelope (eps/2)(1 - cos(2 pi t / t_g)); zero outside [0, t_g].
double envelope(double t_ns, const PulseSpec& spec);

// Integrates i d|psi>/dt = 2 pi H(t) |psi| with
// H(t) = diag(0, f01, f01+f12) + envelope(t) cos(2 pi f_d t + phase) D.
GateSimResult evolve(const ThreeLevelSystem& sys, const PulseSpec& spec,
                     const Eigen::Vector3cd& initial, const EvolveOptions& opt = {});

// evolve from a basis state.
GateSimResult evolve(const ThreeLevelSystem& sys, const PulseSpec& spec, int initial_level = 0,
                     const EvolveOptions& opt = {});

// Same integration with a dt-halving rerun; convergence_estimate = max
// population change.
GateSimResult evolve_checked(const ThreeLevelSystem& sys, const PulseSpec& spec,
                             int initial_level = 0, const EvolveOptions& opt = {});

// Lab-frame propagator over one pulse, columns evolved basis states.
Eigen::Matrix3cd pulse_propagator(const ThreeLevelSystem& sys, const PulseSpec& spec,
                                  const EvolveOptions& opt = {});

// Amplitude of the first P1 maximum (pi-pulse branch): 41-point coarse scan of
// eps over [0, eps_max] with eps_max = 1.5/(|d01| t_g) (pulse area 1.5 pi),
// then golden-section refinement to relative tolerance 1e-6.
// f_d <= 0 selects the default drive frequency f01.
double calibrate_amplitude(const ThreeLevelSystem& sys, double t_g, double f_d = -1.0,
                           const EvolveOptions& opt = {});

// Calibrate, then evolve |0> at eps_star; fills populations, eps_star, leakage.
GateSimResult calibrated_pulse(const ThreeLevelSystem& sys, double t_g, double f_d = -1.0,
                               const EvolveOptions& opt = {});

// P2 at (eps_star, t_g) starting from |0>.
double leakage_error(const ThreeLevelSystem& sys, double t_g, const EvolveOptions& opt = {});

struct DurationPoint {
    double t_g_ns = 0.0;
    double eps_star = 0.0;
    double leakage = 0.0;
    double p1 = 0.0;
};

std::vector<DurationPoint> error_vs_duration(const ThreeLevelSystem& sys,
                                             const std::vector<double>& t_g_grid,
                                             const EvolveOptions& opt = {});

struct PulseTrainResult {
    std::vector<int> counts;
    std::vector<double> eps_grid;
    // p1[count_index][eps_index]
    std::vector<std::vector<double>> p1;
};

// k back-to-back pulses with a phase-continuous carrier at f_d = f01: the
// composed per-pulse propagator is D_z U_lab with
// D_z = diag(1, e^{i 2 pi f_d t_g}, e^{i 4 pi f_d t_g}).
PulseTrainResult simulate_pulse_train(const ThreeLevelSystem& sys, double t_g,
                                      const std::vector<double>& eps_grid,
                                      const std::vector<int>& counts = {4, 16, 36, 64, 100, 144},
                                      const EvolveOptions& opt = {});

}  // namespace fluxsim
