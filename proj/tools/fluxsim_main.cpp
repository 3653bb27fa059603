// fluxsim command-line interface: spectra sweeps, dispersive shifts,
// decoherence budgets, pulse-level gate simulation, curve fitting, RB
// synthesis/fitting and the bundled reproduction targets.

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluxsim/analysis.hpp"
#include "fluxsim/config.hpp"
#include "fluxsim/constants.hpp"
#include "fluxsim/core_model.hpp"
#include "fluxsim/decoherence.hpp"
#include "fluxsim/errors.hpp"
#include "fluxsim/gatesim.hpp"
#include "fluxsim/io.hpp"
#include "fluxsim/rng.hpp"
#include "fluxsim/spectra.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace fluxsim;

constexpr int kExitOk = 0;
constexpr int kExitReproduceFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitFitNotConverged = 4;

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (const double v : parse_double_list(csv)) out.push_back(int(v));
    return out;
}

std::string sanitize_flag(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c == ',' || c == '\n') c = ';';
    }
    return out;
}

json number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

json fit_result_json(const std::string& kind, const FitResult& res) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = kind;
    j["converged"] = res.converged;
    j["n_iter"] = res.n_iter;
    j["residual_rms"] = res.residual_rms;
    j["params"] = json::object();
    j["stderr"] = json::object();
    for (const auto& [k, v] : res.params) j["params"][k] = number_or_null(v);
    for (const auto& [k, v] : res.stderrs) j["stderr"][k] = number_or_null(v);
    return j;
}

void print_fit_result(const std::string& kind, const FitResult& res) {
    std::cout << "fit " << kind << ": " << (res.converged ? "converged" : "NOT converged")
              << " in " << res.n_iter << " iterations, residual rms " << fmt4(res.residual_rms)
              << "\n";
    for (const auto& [k, v] : res.params) {
        std::cout << "  " << k << " = " << fmt4(v);
        const auto it = res.stderrs.find(k);
        if (it != res.stderrs.end() && it->second > 0.0) {
            std::cout << " +- " << fmt4(it->second);
        }
        std::cout << "\n";
    }
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
    std::string config;
    double flux_start = 0.5;
    double flux_stop = 0.5;
    int points = 1;
    std::string transitions = "01,12,02";
    bool with_chi = false;
    std::string out;
};

int cmd_spectrum(const SpectrumArgs& args) {
    const DeviceConfig cfg = load_device_config(args.config);
    if (args.points < 1) throw ConfigError("spectrum: --points must be >= 1");
    std::vector<double> grid;
    for (int i = 0; i < args.points; ++i) {
        grid.push_back(args.points == 1 ? args.flux_start
                                        : args.flux_start
                                              + (args.flux_stop - args.flux_start) * double(i)
                                                    / double(args.points - 1));
    }
    SweepOptions opt;
    opt.transitions.clear();
    for (const double t : parse_double_list(args.transitions)) {
        const int code = int(t);
        opt.transitions.push_back({code / 10, code % 10});
    }
    if (opt.transitions.empty()) throw ConfigError("spectrum: no transitions requested");
    opt.with_chi = args.with_chi;
    if (args.with_chi) {
        opt.g_mhz = cfg.g_mhz();
        opt.f_r = cfg.resonator.f_r;
    }
    const FluxSweep sweep = flux_sweep(cfg.fluxonium, cfg.basis, grid, opt);

    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : sweep.points) {
        std::vector<std::string> row;
        row.push_back(fmt17(pt.flux));
        for (const auto key : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
            const auto it = pt.f.find(key);
            row.push_back(it != pt.f.end() ? fmt17(it->second) : "");
        }
        row.push_back(pt.chi01_mhz ? fmt17(*pt.chi01_mhz) : "");
        row.push_back(sanitize_flag(pt.flag));
        rows.push_back(std::move(row));
    }
    if (!args.out.empty()) {
        write_csv(args.out, {"flux", "f01", "f12", "f02", "chi01_mhz", "flags"}, rows);
    }
    std::cout << "flux      f01 (GHz)  f12 (GHz)  f02 (GHz)\n";
    for (const auto& pt : sweep.points) {
        std::cout << fmt4(pt.flux);
        for (const auto key : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
            const auto it = pt.f.find(key);
            std::cout << "  " << (it != pt.f.end() ? fmt4(it->second) : "-");
        }
        if (pt.chi01_mhz) std::cout << "  chi01 = " << fmt4(*pt.chi01_mhz) << " MHz";
        if (pt.flag != "ok") std::cout << "  [" << sanitize_flag(pt.flag) << "]";
        std::cout << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// chi

int cmd_chi(const std::string& config, std::optional<double> flux, int n_sum,
            const std::string& out) {
    const DeviceConfig cfg = load_device_config(config);
    FluxoniumParams params = cfg.fluxonium;
    if (flux) params.flux = *flux;
    const EigenSolution sol = fluxonium_solution(params, cfg.basis);
    const double g = cfg.g_mhz();
    const double chi = qubit_chi(sol, g, cfg.resonator.f_r, n_sum);
    const double chi0 = dispersive_shift(sol, g, cfg.resonator.f_r, 0, n_sum);
    const double chi1 = dispersive_shift(sol, g, cfg.resonator.f_r, 1, n_sum);
    std::cout << "flux = " << fmt4(params.flux) << ": |chi01| = " << fmt4(chi)
              << " MHz (chi_0 = " << fmt4(chi0) << ", chi_1 = " << fmt4(chi1) << ")\n";
    if (!out.empty()) {
        json j;
        j["schema_version"] = 1;
        j["flux"] = params.flux;
        j["g_mhz"] = g;
        j["f_r_ghz"] = cfg.resonator.f_r;
        j["n_sum"] = n_sum;
        j["chi0_mhz"] = chi0;
        j["chi1_mhz"] = chi1;
        j["chi01_abs_mhz"] = chi;
        write_json(out, j);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// budget

int cmd_budget(const std::string& config, std::optional<double> flux,
               std::optional<double> tphi_err, const std::string& out) {
    const DeviceConfig cfg = load_device_config(config);
    FluxoniumParams params = cfg.fluxonium;
    if (flux) params.flux = *flux;

    const EigenSolution sol = fluxonium_solution(params, cfg.basis);
    const double f01 = sol.transition(0, 1);
    const double n01 = std::abs(sol.n_elems(0, 1));
    const double g = cfg.g_mhz();
    const double chi = qubit_chi(sol, g, cfg.resonator.f_r);
    const auto nth = cfg.resolved_nth();

    BudgetInputs inputs;
    if (cfg.noise.tan_delta > 0.0) {
        inputs.dielectric =
            DielectricChannel{params.e_c, n01, f01, cfg.noise.tan_delta, cfg.noise.temp_qubit};
    }
    if (nth && *nth > 0.0) {
        inputs.thermal = ThermalPhotonChannel{*nth, cfg.resonator.kappa, chi};
    }
    if (cfg.noise.a_phi > 0.0) {
        const Derivative d = flux_derivative(params, cfg.basis, params.flux, {0, 1});
        inputs.flux_noise = FluxNoiseChannel{cfg.noise.a_phi, d.value};
    }
    const RateBudget budget = coherence_budget(inputs);

    std::cout << "device budget at flux = " << fmt4(params.flux) << "\n";
    std::cout << "  f01       = " << fmt4(f01) << " GHz\n";
    std::cout << "  |n01|     = " << fmt4(n01) << "\n";
    std::cout << "  chi01     = " << fmt4(chi) << " MHz\n";
    if (nth) {
        std::cout << "  n_th      = " << fmt4(*nth);
        const double t_res = temp_from_nth(*nth, cfg.resonator.f_r);
        if (tphi_err && inputs.thermal) {
            const double tphi = 1.0 / thermal_photon_rate(*nth, cfg.resonator.kappa, chi);
            const auto n_err = nth_from_tphi_with_err(tphi, *tphi_err, cfg.resonator.kappa, chi);
            const auto t_err = temp_from_nth_with_err(n_err, cfg.resonator.f_r);
            std::cout << " +- " << fmt4(n_err.error);
            std::cout << "\n  T_res     = " << fmt4(t_res * 1e3) << " +- "
                      << fmt4(t_err.error * 1e3) << " mK\n";
        } else {
            std::cout << "\n  T_res     = " << fmt4(t_res * 1e3) << " mK\n";
        }
    }
    for (const auto& c : budget.contributions) {
        std::cout << "  " << c.mechanism << ": rate = " << fmt4(c.rate_per_us) << " /us ("
                  << c.envelope << ")\n";
    }
    std::cout << "  T1_pred   = " << fmt4(budget.t1_pred) << " us\n";
    std::cout << "  Tphi_pred = " << fmt4(budget.tphi_pred) << " us\n";
    std::cout << "  T2_pred   = " << fmt4(budget.t2_pred) << " us\n";

    if (!out.empty()) {
        json j;
        j["schema_version"] = 1;
        j["flux"] = params.flux;
        j["f01_ghz"] = f01;
        j["n01_abs"] = n01;
        j["chi01_mhz"] = chi;
        if (nth) {
            j["n_th"] = *nth;
            j["t_res_k"] = temp_from_nth(*nth, cfg.resonator.f_r);
        }
        j["contributions"] = json::array();
        for (const auto& c : budget.contributions) {
            j["contributions"].push_back({{"mechanism", c.mechanism},
                                          {"rate_per_us", c.rate_per_us},
                                          {"envelope", c.envelope}});
        }
        j["t1_pred_us"] = number_or_null(budget.t1_pred);
        j["tphi_pred_us"] = number_or_null(budget.tphi_pred);
        j["t2_pred_us"] = number_or_null(budget.t2_pred);
        write_json(out, j);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gate-sim

int cmd_gate_sim(const std::string& config, const std::string& system, const std::string& tg_grid,
                 const std::string& out) {
    const DeviceConfig cfg = load_device_config(config);
    ThreeLevelSystem sys;
    if (system == "fluxonium") {
        sys = truncate_system(fluxonium_solution(cfg.fluxonium, cfg.basis),
                              SystemKind::fluxonium);
    } else if (system == "transmon") {
        if (!cfg.transmon) throw ConfigError("gate-sim: config has no [transmon] section");
        sys = truncate_system(transmon_solution(*cfg.transmon, cfg.basis), SystemKind::transmon);
    } else {
        throw ConfigError("gate-sim: --system must be fluxonium or transmon");
    }
    const std::vector<double> grid = parse_double_list(tg_grid);
    if (grid.empty()) throw ConfigError("gate-sim: empty --tg-grid");
    const auto curve = error_vs_duration(sys, grid);

    std::cout << "t_g (ns)  eps*      leakage     P1\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : curve) {
        std::cout << fmt4(pt.t_g_ns) << "      " << fmt4(pt.eps_star) << "   "
                  << fmt4(pt.leakage) << "   " << fmt4(pt.p1) << "\n";
        rows.push_back({fmt17(pt.t_g_ns), fmt17(pt.eps_star), fmt17(pt.leakage), fmt17(pt.p1)});
    }
    if (!out.empty()) write_csv(out, {"t_g_ns", "eps_star", "leakage", "p1"}, rows);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fit

DecayTrace trace_from_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int ct = table.column("t_us");
    const int cy = table.column("y");
    const int cs = table.column("sigma");
    if (ct < 0 || cy < 0) {
        throw std::invalid_argument("fit: CSV must have columns t_us,y[,sigma]");
    }
    DecayTrace trace;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        trace.t.push_back(csv_number(table, r, ct));
        trace.y.push_back(csv_number(table, r, cy));
        if (cs >= 0) trace.sigma.push_back(csv_number(table, r, cs));
    }
    trace.validate();
    return trace;
}

FrequencyScan scan_from_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int cf = table.column("f_mhz");
    const int cy = table.column("y");
    if (cf < 0 || cy < 0) {
        throw std::invalid_argument("fit: CSV must have columns f_mhz,y");
    }
    FrequencyScan scan;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        scan.f.push_back(csv_number(table, r, cf));
        scan.y.push_back(csv_number(table, r, cy));
    }
    scan.validate();
    return scan;
}

std::vector<SpectroscopyPoint> spectroscopy_from_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int cflux = table.column("flux");
    const int cf = table.column("f_ghz");
    const int ct = table.column("transition");
    if (cflux < 0 || cf < 0 || ct < 0) {
        throw std::invalid_argument("fit: CSV must have columns flux,f_ghz,transition");
    }
    std::vector<SpectroscopyPoint> pts;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        SpectroscopyPoint pt;
        pt.flux = csv_number(table, r, cflux);
        pt.f_ghz = csv_number(table, r, cf);
        const std::string& label = table.rows[r][size_t(ct)];
        if (label == "01") {
            pt.label = TransitionLabel::f01;
        } else if (label == "02") {
            pt.label = TransitionLabel::f02;
        } else if (label == "resonator") {
            pt.label = TransitionLabel::resonator;
        } else {
            throw std::invalid_argument("fit: transition must be 01, 02 or resonator, got '"
                                        + label + "'");
        }
        pts.push_back(pt);
    }
    return pts;
}

struct HamiltonianFitArgs {
    HamiltonianGuess guess;
    bool fit_resonator = true;
};

int cmd_fit(const std::string& kind, const std::string& in, const std::string& out,
            const HamiltonianFitArgs& ham) {
    FitResult res;
    if (kind == "exp") {
        res = fit_exponential(trace_from_csv(in));
    } else if (kind == "gauss") {
        res = fit_gaussian_decay(trace_from_csv(in));
    } else if (kind == "cosine") {
        res = fit_damped_cosine(trace_from_csv(in));
    } else if (kind == "lorentzian") {
        res = fit_lorentzian(scan_from_csv(in));
    } else if (kind == "hamiltonian") {
        if (!(ham.guess.e_j > 0.0 && ham.guess.e_l > 0.0 && ham.guess.e_c > 0.0)) {
            throw ConfigError(
                "fit hamiltonian: --guess-ej/--guess-el/--guess-ec are required (GHz)");
        }
        res = fit_hamiltonian(spectroscopy_from_csv(in), ham.guess, ham.fit_resonator);
    } else {
        throw ConfigError("fit: unknown kind '" + kind + "'");
    }
    print_fit_result(kind, res);
    if (!out.empty()) write_json(out, fit_result_json(kind, res));
    return res.converged ? kExitOk : kExitFitNotConverged;
}

// ---------------------------------------------------------------------------
// rb

int cmd_rb_synth(double p, double a, double b, const std::string& m_list, double sigma,
                 int n_rand, std::uint64_t seed, const std::string& out) {
    const std::vector<int> ms = parse_int_list(m_list);
    const RBDataset data = synth_rb(p, a, b, ms, sigma, n_rand, seed);
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < data.m.size(); ++i) {
        rows.push_back({std::to_string(data.m[i]), fmt17(data.f[i])});
    }
    if (!out.empty()) write_csv(out, {"m", "fidelity"}, rows);
    std::cout << "synthesized " << data.m.size() << " RB points (n_rand = " << data.n_rand
              << ", seed = " << seed << ")\n";
    return kExitOk;
}

int cmd_rb_fit(const std::string& in, const std::string& out) {
    const CsvTable table = read_csv(in);
    const int cm = table.column("m");
    const int cf = table.column("fidelity");
    if (cm < 0 || cf < 0) throw std::invalid_argument("rb fit: CSV must have columns m,fidelity");
    RBDataset data;
    data.n_rand = 1;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        data.m.push_back(int(csv_number(table, r, cm)));
        data.f.push_back(csv_number(table, r, cf));
    }
    const FitResult res = fit_rb(data);
    print_fit_result("rb", res);
    if (!out.empty()) write_json(out, fit_result_json("rb", res));
    return res.converged ? kExitOk : kExitFitNotConverged;
}

// ---------------------------------------------------------------------------
// reproduce

struct CheckList {
    int failures = 0;

    void check(const std::string& name, double computed, double reference, double rel_tol) {
        const double delta = std::abs(computed - reference) / std::abs(reference);
        const bool ok = delta <= rel_tol;
        if (!ok) ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": computed " << fmt4(computed)
                  << ", reference " << fmt4(reference) << ", delta " << fmt4(delta * 100.0)
                  << "% (tol " << fmt4(rel_tol * 100.0) << "%)\n";
    }

    void check_bound(const std::string& name, double computed, double bound, bool lower) {
        const bool ok = lower ? computed >= bound : computed <= bound;
        if (!ok) ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": " << fmt4(computed)
                  << (lower ? " >= " : " <= ") << fmt4(bound) << "\n";
    }
};

int cmd_reproduce(const std::string& target, const std::string& fixtures,
                  const std::string& out_dir) {
    namespace fs = std::filesystem;
    const std::string cfg3_path = (fs::path(fixtures) / "fluxonium3.cfg").string();
    const std::string cfg4_path = (fs::path(fixtures) / "fluxonium4.cfg").string();
    const auto out_path = [&](const std::string& name) {
        return (fs::path(out_dir) / name).string();
    };
    CheckList checks;

    if (target == "table-s1-derived") {
        const struct {
            std::string path, name;
            double f01_ref, ratio_ref, chi_ref, chi_tol;
        } devices[] = {{cfg3_path, "fluxonium3", 1.252, 2.14, 1.39, 0.10},
                       {cfg4_path, "fluxonium4", 1.330, 1.99, 0.63, 0.15}};
        std::vector<std::vector<std::string>> rows;
        for (const auto& dev : devices) {
            const DeviceConfig cfg = load_device_config(dev.path);
            const EigenSolution sol = fluxonium_solution(cfg.fluxonium, cfg.basis);
            const double f01 = sol.transition(0, 1);
            const double ratio = sol.transition(1, 2) / f01;
            const double chi = qubit_chi(sol, cfg.g_mhz(), cfg.resonator.f_r);
            checks.check(dev.name + " f01 (GHz)", f01, dev.f01_ref, 0.01);
            checks.check(dev.name + " f12/f01", ratio, dev.ratio_ref, 0.02);
            checks.check(dev.name + " |chi01| (MHz)", chi, dev.chi_ref, dev.chi_tol);
            rows.push_back({dev.name, "f01_ghz", fmt17(f01), fmt17(dev.f01_ref)});
            rows.push_back({dev.name, "f12_over_f01", fmt17(ratio), fmt17(dev.ratio_ref)});
            rows.push_back({dev.name, "chi01_mhz", fmt17(chi), fmt17(dev.chi_ref)});
        }
        write_csv(out_path("table_s1_derived.csv"),
                  {"device", "quantity", "computed", "reference"}, rows);
    } else if (target == "fig2") {
        const DeviceConfig cfg = load_device_config(cfg3_path);
        const CrossingResult cr = avoided_crossing(cfg.fluxonium, cfg.basis, cfg.resonator,
                                                   cfg.coupling, {2, 0}, {0, 1}, 0.2, 0.3);
        std::cout << "avoided crossing at flux* = " << fmt4(cr.flux_star) << "\n";
        checks.check("fig2 splitting (MHz)", cr.splitting_mhz, 31.0, 0.10);
        checks.check("fig2 splitting vs 2g|n20|", cr.splitting_mhz, cr.two_g_n_mhz, 0.05);

        std::vector<std::vector<std::string>> rows;
        const double g_ghz = cfg.g_mhz() * 1e-3;
        for (int i = 0; i <= 50; ++i) {
            const double flux = 0.2 + 0.1 * double(i) / 50.0;
            FluxoniumParams p = cfg.fluxonium;
            p.flux = flux;
            const double upper =
                dressed_transition(p, cfg.basis, cfg.resonator, g_ghz, {0, 0}, {2, 0});
            const double lower =
                dressed_transition(p, cfg.basis, cfg.resonator, g_ghz, {0, 0}, {0, 1});
            rows.push_back({fmt17(flux), fmt17(upper), fmt17(lower)});
        }
        write_csv(out_path("fig2_branches.csv"), {"flux", "f_branch_20_ghz", "f_branch_01_ghz"},
                  rows);
    } else if (target == "fig3d") {
        const DeviceConfig cfg = load_device_config(cfg3_path);
        const double chi_ref = 1.39;  // measured dispersive shift, MHz
        const double fwhm = cfg.resonator.kappa;
        const CounterRng rng(20260809);
        FrequencyScan ground, excited;
        std::vector<std::vector<std::string>> rows;
        for (int i = 0; i < 81; ++i) {
            const double f = -3.0 + 6.0 * double(i) / 80.0;  // MHz around the midpoint
            const auto lorentz = [&](double f0) {
                const double hw = 0.5 * fwhm;
                return 1.0 - 0.8 * hw * hw / ((f - f0) * (f - f0) + hw * hw);
            };
            const double yg = lorentz(-chi_ref / 2.0) + 0.02 * rng.gaussian(2 * i);
            const double ye = lorentz(chi_ref / 2.0) + 0.02 * rng.gaussian(2 * i + 1);
            ground.f.push_back(f);
            ground.y.push_back(yg);
            excited.f.push_back(f);
            excited.y.push_back(ye);
            rows.push_back({fmt17(f), fmt17(yg), fmt17(ye)});
        }
        write_csv(out_path("fig3d_scans.csv"), {"f_mhz", "y_ground", "y_excited"}, rows);
        const double chi = chi_from_scans(ground, excited);
        checks.check("fig3d extracted chi01 (MHz)", chi, chi_ref, 0.03);
    } else if (target == "fig4b") {
        const DeviceConfig cfg = load_device_config(cfg3_path);
        if (!cfg.transmon) throw ConfigError("fig4b: fixture has no [transmon] section");
        const ThreeLevelSystem fl =
            truncate_system(fluxonium_solution(cfg.fluxonium, cfg.basis), SystemKind::fluxonium);
        const ThreeLevelSystem tr =
            truncate_system(transmon_solution(*cfg.transmon, cfg.basis), SystemKind::transmon);
        const std::vector<double> grid = {4.0, 6.0, 10.0, 16.0, 24.0};
        const auto curve_fl = error_vs_duration(fl, grid);
        const auto curve_tr = error_vs_duration(tr, grid);
        std::vector<std::vector<std::string>> rows;
        for (size_t i = 0; i < grid.size(); ++i) {
            rows.push_back({fmt17(grid[i]), fmt17(curve_fl[i].leakage),
                            fmt17(curve_tr[i].leakage), fmt17(curve_fl[i].p1),
                            fmt17(curve_tr[i].p1)});
        }
        write_csv(out_path("fig4b_leakage.csv"),
                  {"t_g_ns", "leakage_fluxonium", "leakage_transmon", "p1_fluxonium",
                   "p1_transmon"},
                  rows);
        const double ratio = curve_tr[1].leakage / curve_fl[1].leakage;
        checks.check_bound("fig4b transmon/fluxonium leakage ratio at 6 ns", ratio, 1e3, true);
        for (size_t i = 0; i < grid.size(); ++i) {
            checks.check_bound("fig4b fluxonium below transmon at t_g = " + fmt4(grid[i]),
                               curve_fl[i].leakage, curve_tr[i].leakage, false);
        }
    } else if (target == "s1") {
        const struct {
            std::string path, name;
            double chi_ref, chi_tol;
        } devices[] = {{cfg3_path, "fluxonium3", 1.39, 0.10},
                       {cfg4_path, "fluxonium4", 0.63, 0.15}};
        for (const auto& dev : devices) {
            const DeviceConfig cfg = load_device_config(dev.path);
            std::vector<double> grid;
            for (int i = 0; i <= 100; ++i) grid.push_back(0.001 + 0.499 * double(i) / 100.0);
            SweepOptions opt;
            opt.with_chi = true;
            opt.g_mhz = cfg.g_mhz();
            opt.f_r = cfg.resonator.f_r;
            const FluxSweep sweep = flux_sweep(cfg.fluxonium, cfg.basis, grid, opt);
            std::vector<std::vector<std::string>> rows;
            double chi_sweet = 0.0;
            for (const auto& pt : sweep.points) {
                rows.push_back({fmt17(pt.flux), pt.chi01_mhz ? fmt17(*pt.chi01_mhz) : "",
                                sanitize_flag(pt.flag)});
                if (pt.chi01_mhz && std::abs(pt.flux - 0.5) < 1e-9) chi_sweet = *pt.chi01_mhz;
            }
            write_csv(out_path("s1_chi_" + dev.name + ".csv"), {"flux", "chi01_mhz", "flags"},
                      rows);
            checks.check("s1 " + dev.name + " sweet-spot |chi01| (MHz)", chi_sweet, dev.chi_ref,
                         dev.chi_tol);
        }
    } else if (target == "s2-curve") {
        const DeviceConfig cfg = load_device_config(cfg3_path);
        const double t1_floor = 77.3;
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(0.46 + 0.08 * double(i) / 40.0);
        const auto profile =
            flux_dephasing_profile(cfg.fluxonium, cfg.basis, cfg.noise.a_phi, grid, t1_floor);
        std::vector<std::vector<std::string>> rows;
        for (const auto& pt : profile) rows.push_back({fmt17(pt.flux), fmt17(pt.t2)});
        write_csv(out_path("s2_t2_profile.csv"), {"flux", "t2_us"}, rows);

        // Generate-then-refit round trip at 10% noise.
        const CounterRng rng(2026);
        std::vector<FluxT2Observation> obs;
        int ctr = 0;
        for (double flux = 0.455; flux < 0.5459; flux += 0.005) {
            const auto pt = flux_dephasing_profile(cfg.fluxonium, cfg.basis, cfg.noise.a_phi,
                                                   {flux}, t1_floor)
                                .front();
            obs.push_back({flux, pt.t2 * (1.0 + 0.10 * rng.gaussian(ctr++))});
        }
        const FitResult fit = fit_t2_vs_flux(obs, cfg.fluxonium, cfg.basis, t1_floor);
        checks.check("s2 recovered A_Phi (uPhi0/sqrt(Hz))", fit.params.at("a_phi"),
                     cfg.noise.a_phi, 0.10);
    } else {
        throw ConfigError("reproduce: unknown target '" + target + "'");
    }

    if (checks.failures > 0) {
        std::cout << checks.failures << " check(s) FAILED\n";
        return kExitReproduceFail;
    }
    std::cout << "all checks passed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluxonium circuit-QED modeling, simulation and analysis toolkit"};
    app.require_subcommand(1);

    SpectrumArgs spectrum_args;
    auto* spectrum = app.add_subcommand("spectrum", "flux sweep of transition frequencies");
    spectrum->add_option("--config", spectrum_args.config, "device config file")->required();
    spectrum->add_option("--flux-start", spectrum_args.flux_start, "first flux point");
    spectrum->add_option("--flux-stop", spectrum_args.flux_stop, "last flux point");
    spectrum->add_option("--points", spectrum_args.points, "number of grid points");
    spectrum->add_option("--transitions", spectrum_args.transitions, "comma list, e.g. 01,12,02");
    spectrum->add_flag("--with-chi", spectrum_args.with_chi, "also compute chi01");
    spectrum->add_option("--out", spectrum_args.out, "CSV output path");

    std::string chi_config, chi_out;
    std::optional<double> chi_flux;
    int chi_nsum = 20;
    auto* chi = app.add_subcommand("chi", "dispersive shift at one flux point");
    chi->add_option("--config", chi_config)->required();
    chi->add_option("--flux", chi_flux);
    chi->add_option("--n-sum", chi_nsum);
    chi->add_option("--out", chi_out, "JSON output path");

    std::string budget_config, budget_out;
    std::optional<double> budget_flux, budget_tphi_err;
    auto* budget = app.add_subcommand("budget", "decoherence budget");
    budget->add_option("--config", budget_config)->required();
    budget->add_option("--flux", budget_flux);
    budget->add_option("--tphi-err", budget_tphi_err, "T_phi uncertainty (us) to propagate");
    budget->add_option("--out", budget_out, "JSON output path");

    std::string gs_config, gs_system = "fluxonium", gs_grid = "6", gs_out;
    auto* gatesim = app.add_subcommand("gate-sim", "calibrated-pulse leakage vs duration");
    gatesim->add_option("--config", gs_config)->required();
    gatesim->add_option("--system", gs_system, "fluxonium or transmon");
    gatesim->add_option("--tg-grid", gs_grid, "comma list of gate durations (ns)");
    gatesim->add_option("--out", gs_out, "CSV output path");

    std::string fit_kind, fit_in, fit_out;
    HamiltonianFitArgs fit_ham;
    auto* fit = app.add_subcommand("fit", "fit a measurement trace");
    fit->add_option("--kind", fit_kind, "exp | gauss | cosine | lorentzian | hamiltonian")
        ->required();
    fit->add_option("--in", fit_in, "input CSV")->required();
    fit->add_option("--out", fit_out, "JSON output path");
    fit->add_option("--guess-ej", fit_ham.guess.e_j, "hamiltonian: E_J/h guess (GHz)");
    fit->add_option("--guess-el", fit_ham.guess.e_l, "hamiltonian: E_L/h guess (GHz)");
    fit->add_option("--guess-ec", fit_ham.guess.e_c, "hamiltonian: E_C/h guess (GHz)");
    fit->add_option("--guess-fr", fit_ham.guess.f_r, "hamiltonian: resonator guess (GHz)");
    fit->add_option("--guess-g", fit_ham.guess.g_ghz, "hamiltonian: coupling guess (GHz)");
    fit->add_flag("!--no-fit-resonator", fit_ham.fit_resonator,
                  "hamiltonian: hold f_r and g at the guess");

    auto* rb = app.add_subcommand("rb", "randomized-benchmarking synthesis and fitting");
    rb->require_subcommand(1);
    double rb_p = 0.998, rb_a = 0.5, rb_b = 0.45, rb_sigma = 0.0;
    int rb_nrand = 32;
    std::uint64_t rb_seed = 0;
    std::string rb_mlist = "1,10,30,100,300,1000,3000", rb_out, rb_in;
    auto* rb_synth_cmd = rb->add_subcommand("synth", "generate a synthetic RB dataset");
    rb_synth_cmd->add_option("--p", rb_p, "depolarization parameter");
    rb_synth_cmd->add_option("--a", rb_a);
    rb_synth_cmd->add_option("--b", rb_b);
    rb_synth_cmd->add_option("--m-list", rb_mlist, "comma list of sequence lengths");
    rb_synth_cmd->add_option("--sigma", rb_sigma, "per-draw noise");
    rb_synth_cmd->add_option("--n-rand", rb_nrand, "randomizations per point");
    rb_synth_cmd->add_option("--seed", rb_seed, "RNG seed (mandatory)")->required();
    rb_synth_cmd->add_option("--out", rb_out, "CSV output path");
    auto* rb_fit_cmd = rb->add_subcommand("fit", "fit A + B p^m");
    rb_fit_cmd->add_option("--in", rb_in, "input CSV")->required();
    rb_fit_cmd->add_option("--out", rb_out, "JSON output path");

    std::string rep_target, rep_fixtures = "fixtures", rep_outdir = ".";
    auto* reproduce = app.add_subcommand("reproduce", "run a bundled reproduction target");
    reproduce
        ->add_option("--target", rep_target,
                     "fig2 | fig3d | fig4b | s1 | s2-curve | table-s1-derived")
        ->required();
    reproduce->add_option("--fixtures", rep_fixtures, "directory with device fixtures");
    reproduce->add_option("--out-dir", rep_outdir, "directory for emitted CSV data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(spectrum_args);
        if (chi->parsed()) return cmd_chi(chi_config, chi_flux, chi_nsum, chi_out);
        if (budget->parsed()) {
            return cmd_budget(budget_config, budget_flux, budget_tphi_err, budget_out);
        }
        if (gatesim->parsed()) return cmd_gate_sim(gs_config, gs_system, gs_grid, gs_out);
        if (fit->parsed()) return cmd_fit(fit_kind, fit_in, fit_out, fit_ham);
        if (rb->parsed()) {
            if (rb_synth_cmd->parsed()) {
                return cmd_rb_synth(rb_p, rb_a, rb_b, rb_mlist, rb_sigma, rb_nrand, rb_seed,
                                    rb_out);
            }
            return cmd_rb_fit(rb_in, rb_out);
        }
        if (reproduce->parsed()) return cmd_reproduce(rep_target, rep_fixtures, rep_outdir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
