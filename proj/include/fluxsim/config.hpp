#pragma once

// Flat INI-style device configuration: [section] blocks of key = value lines
// with unit suffixes in the key names. Unknown sections or keys are rejected
// with line/column information.

#include <optional>
#include <string>
#include <vector>

#include "fluxsim/core_model.hpp"
#include "fluxsim/decoherence.hpp"

namespace fluxsim {

struct DeviceConfig {
    FluxoniumParams fluxonium;
    ResonatorParams resonator;
    CouplingSpec coupling;
    NoiseEnvironment noise;
    std::optional<TransmonParams> transmon;
    BasisConfig basis;

    // Resolved coupling rate in MHz (direct or via the capacitance route).
    double g_mhz() const;
    // Resonator photon number from the noise section (nth directly or via the
    // Bose-Einstein occupation at temp_res).
    std::optional<double> resolved_nth() const;
};

DeviceConfig parse_device_config(const std::string& text);
DeviceConfig load_device_config(const std::string& path);

}  // namespace fluxsim
