#include "fluxsim/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fluxsim/errors.hpp"

namespace fluxsim {

namespace {

struct Cursor {
    int line = 0;
    int col = 0;
};

double parse_number(const std::string& value, const Cursor& at) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ConfigError("not a number: '" + value + "'", at.line, at.col);
    }
    return v;
}

int parse_int(const std::string& value, const Cursor& at) {
    const double v = parse_number(value, at);
    const int i = int(v);
    if (double(i) != v) throw ConfigError("not an integer: '" + value + "'", at.line, at.col);
    return i;
}

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

double DeviceConfig::g_mhz() const {
    return coupling_g_mhz(coupling, fluxonium, resonator);
}

std::optional<double> DeviceConfig::resolved_nth() const {
    if (noise.n_th) return noise.n_th;
    if (noise.temp_res) return nth_from_temp(*noise.temp_res, resonator.f_r);
    return std::nullopt;
}

DeviceConfig parse_device_config(const std::string& text) {
    DeviceConfig cfg;
    bool saw_fluxonium = false;
    bool saw_transmon = false;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const size_t comment = raw.find_first_of("#;");
        std::string line = comment == std::string::npos ? raw : raw.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("unterminated section header", line_no, 1);
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "fluxonium" && section != "resonator" && section != "coupling"
                && section != "noise" && section != "transmon" && section != "basis") {
                throw ConfigError("unknown section [" + section + "]", line_no, 1);
            }
            if (section == "transmon") {
                cfg.transmon = TransmonParams{};
                saw_transmon = true;
            }
            if (section == "fluxonium") saw_fluxonium = true;
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected key = value", line_no, 1);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const int value_col = int(raw.find(value, raw.find('=')) + 1);
        const Cursor at{line_no, value_col > 0 ? value_col : int(eq) + 2};
        if (key.empty()) throw ConfigError("empty key", line_no, 1);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", at.line, at.col);
        if (section.empty()) {
            throw ConfigError("key '" + key + "' outside any section", line_no, 1);
        }

        const auto unknown = [&]() {
            throw ConfigError("unknown key '" + key + "' in section [" + section + "]", line_no,
                              1);
        };
        if (section == "fluxonium") {
            if (key == "ej_ghz") cfg.fluxonium.e_j = parse_number(value, at);
            else if (key == "el_ghz") cfg.fluxonium.e_l = parse_number(value, at);
            else if (key == "ec_ghz") cfg.fluxonium.e_c = parse_number(value, at);
            else if (key == "flux") cfg.fluxonium.flux = parse_number(value, at);
            else unknown();
        } else if (section == "resonator") {
            if (key == "fr_ghz") cfg.resonator.f_r = parse_number(value, at);
            else if (key == "kappa_mhz") cfg.resonator.kappa = parse_number(value, at);
            else if (key == "lr_nh") cfg.resonator.l_r = parse_number(value, at);
            else if (key == "cr_ff") cfg.resonator.c_r = parse_number(value, at);
            else unknown();
        } else if (section == "coupling") {
            if (key == "g_mhz") cfg.coupling.g_mhz = parse_number(value, at);
            else if (key == "cqr_ff") cfg.coupling.c_qr = parse_number(value, at);
            else if (key == "csigma_ff") cfg.coupling.c_sigma = parse_number(value, at);
            else if (key == "cr_ff") cfg.coupling.c_r = parse_number(value, at);
            else unknown();
        } else if (section == "noise") {
            if (key == "temp_qubit_k") cfg.noise.temp_qubit = parse_number(value, at);
            else if (key == "temp_res_k") cfg.noise.temp_res = parse_number(value, at);
            else if (key == "nth") cfg.noise.n_th = parse_number(value, at);
            else if (key == "a_phi_uphi0") cfg.noise.a_phi = parse_number(value, at);
            else if (key == "tan_delta") cfg.noise.tan_delta = parse_number(value, at);
            else unknown();
        } else if (section == "transmon") {
            if (key == "ej_ghz") cfg.transmon->e_j = parse_number(value, at);
            else if (key == "ec_ghz") cfg.transmon->e_c = parse_number(value, at);
            else if (key == "ng") cfg.transmon->n_g = parse_number(value, at);
            else unknown();
        } else if (section == "basis") {
            if (key == "n_osc") cfg.basis.n_osc = parse_int(value, at);
            else if (key == "n_flux_keep") cfg.basis.n_flux_keep = parse_int(value, at);
            else if (key == "n_res") cfg.basis.n_res = parse_int(value, at);
            else if (key == "n_charge") cfg.basis.n_charge = parse_int(value, at);
            else unknown();
        }
    }

    if (!saw_fluxonium) throw ConfigError("missing [fluxonium] section");
    try {
        cfg.fluxonium.validate();
        cfg.resonator.validate();
        cfg.coupling.validate();
        cfg.noise.validate();
        cfg.basis.validate();
        if (saw_transmon) cfg.transmon->validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

DeviceConfig load_device_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_device_config(buf.str());
}

}  // namespace fluxsim
