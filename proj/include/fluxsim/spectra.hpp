#pragma once

// Diagonalization, transition tables, dispersive shifts, flux sweeps, avoided
// crossings and flux derivatives.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fluxsim/core_model.hpp"

namespace fluxsim {

struct EigenSolution {
    Eigen::VectorXd energies;   // ascending, GHz
    Eigen::MatrixXcd states;    // eigenvectors as columns, construction basis
    Eigen::MatrixXcd n_elems;   // charge matrix elements <j|n|k>, Cooper pairs
    std::string basis_tag;

    double transition(int i, int j) const { return energies(j) - energies(i); }
};

// Lowest n_keep eigenpairs of a Hermitian operator plus the matrix elements of
// n_op in that eigenbasis. Eigenvector phases are fixed so the
// largest-magnitude component is real positive.
EigenSolution diagonalize(const OperatorMatrix& h, int n_keep, const OperatorMatrix& n_op);

// Convenience: build the fluxonium Hamiltonian and keep basis.n_flux_keep levels.
EigenSolution fluxonium_solution(const FluxoniumParams& params, const BasisConfig& basis);

// Lowest three transmon levels with the charge-operator matrix elements.
EigenSolution transmon_solution(const TransmonParams& params, const BasisConfig& basis);

// Dispersive shift of state j (second-order sum over the lowest n_sum levels),
// chi_j = g^2 sum_k |n_jk|^2 2 f_jk / (f_jk^2 - f_r^2), returned in MHz.
// Throws NumericalError naming (j,k) if any |f_jk| is within 1 kHz of f_r.
double dispersive_shift(const EigenSolution& sol, double g_mhz, double f_r, int state_j,
                        int n_sum = 20);

// |chi_0 - chi_1| in MHz.
double qubit_chi(const EigenSolution& sol, double g_mhz, double f_r, int n_sum = 20);

struct FluxPoint {
    double flux = 0.0;
    std::map<std::pair<int, int>, double> f;  // (i,j) -> f_ij, GHz
    std::optional<double> chi01_mhz;
    std::string flag = "ok";
};

struct FluxSweep {
    std::vector<double> flux_grid;
    std::vector<FluxPoint> points;
};

struct SweepOptions {
    std::vector<std::pair<int, int>> transitions = {{0, 1}, {1, 2}, {0, 2}};
    bool with_chi = false;
    double g_mhz = 0.0;  // used when with_chi
    double f_r = 0.0;    // used when with_chi
    int n_sum = 20;
};

// Per-point diagonalization over the grid; numerical errors at a point are
// recorded in its flag instead of aborting the sweep.
FluxSweep flux_sweep(const FluxoniumParams& params, const BasisConfig& basis,
                     const std::vector<double>& flux_grid, const SweepOptions& opt = {});

struct CrossingResult {
    double flux_star = 0.0;      // flux of minimum dressed gap
    double splitting_mhz = 0.0;  // minimum gap
    double two_g_n_mhz = 0.0;    // 2 g |n_ab| cross-check at flux_star
};

// Bare product states labeled (fluxonium level, resonator photons).
using BareState = std::pair<int, int>;

// Minimizes the gap between the two dressed branches tracking the given bare
// states over [flux_lo, flux_hi] (golden section, then parabolic refinement on
// the squared gap). Pre: the bare detuning changes sign inside the window.
CrossingResult avoided_crossing(const FluxoniumParams& params, const BasisConfig& basis,
                                const ResonatorParams& res, const CouplingSpec& cpl,
                                BareState state_a, BareState state_b, double flux_lo,
                                double flux_hi);

struct Derivative {
    double value = 0.0;           // GHz per Phi_0
    double error_estimate = 0.0;
};

// Central finite difference of f_ij(flux) with one Richardson refinement.
Derivative flux_derivative(const FluxoniumParams& params, const BasisConfig& basis, double flux,
                           std::pair<int, int> transition, double step = 1e-4);

// Dressed transition frequency from the dressed state with maximum overlap on
// bare |from> to the one with maximum overlap on bare |to>. Used by the
// spectroscopy fit.
double dressed_transition(const FluxoniumParams& params, const BasisConfig& basis,
                          const ResonatorParams& res, double g_ghz, BareState from,
                          BareState to);

}  // namespace fluxsim
