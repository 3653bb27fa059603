#pragma once

namespace fluxsim::constants {

// Unit convention, project-wide: energies and frequencies are E/h in GHz
// (linear frequency), time is ns inside gatesim and us inside
// decoherence/analysis, flux in Phi_0, temperature in K, capacitance in fF,
// inductance in nH.

// h * (1 GHz) / k_B, the single hard-coded GHz <-> Kelvin conversion.
inline constexpr double ghz_to_kelvin = 0.047992;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// SI values used only by the capacitance route to the coupling rate.
inline constexpr double planck_h = 6.62607015e-34;       // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C

// Resistance quantum R_q = h / (2e)^2, in Ohm.
inline constexpr double resistance_quantum =
    planck_h / (4.0 * elementary_charge * elementary_charge);

}  // namespace fluxsim::constants
