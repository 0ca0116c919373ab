// Command-line driver. Four subcommands:
//   simulate  sample an occupation trajectory, emit CSV plus sidecars
//   spectrum  solve a finite cavity and emit its normal modes as CSV
//   verify    run the acceptance suite and report per-criterion results
//   compare   run two scenarios on a shared grid and emit |difference|
//
// Exit codes: 0 success, 1 verification failure, 2 config error,
// 3 quadrature failure, 4 stability error.

#include "CLI11.hpp"

#include "oscbath/bare_dynamics.hpp"
#include "oscbath/dressed_dynamics.hpp"
#include "oscbath/errors.hpp"
#include "oscbath/model.hpp"
#include "oscbath/quadrature.hpp"
#include "oscbath/spectrum.hpp"
#include "oscbath/verification.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using oscbath::ConfigError;
using oscbath::OccupationPoint;
using oscbath::PhysParams;

// Everything a run needs, before it is split into PhysParams / CavityConfig /
// QuadratureSpec. approach and mode stay as strings so config-file values and
// flag values flow through one validation path.
struct RunConfig {
    std::string approach = "dressed";
    std::string mode = "continuum";
    double omega_bar = 1.0;
    double g = 0.1;
    double beta = 2.0;
    double n0 = 1.0;
    double R = 0.0;
    double c = 1.0;
    int N = 0;
    bool R_set = false;
    bool c_set = false;
    bool N_set = false;
    double t_start = 1.0;
    double t_end = 50.0;
    int steps = 50;
    bool log_grid = false;
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    std::string output;
};

// Shortest decimal that round-trips to the same double. Keeps CSV output
// bit-identical across runs without carrying formatting state.
std::string fmt_shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fixed 17 significant digits for the mode tables.
std::string fmt_sig17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key or value");
        kv[key] = value;
    }
    return kv;
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a number: " + v);
    }
    if (pos != v.size()) throw ConfigError("config key " + key + ": trailing junk in: " + v);
    if (!std::isfinite(x)) throw ConfigError("config key " + key + ": must be finite");
    return x;
}

int parse_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    int x = 0;
    try {
        x = std::stoi(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not an integer: " + v);
    }
    if (pos != v.size()) throw ConfigError("config key " + key + ": trailing junk in: " + v);
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw ConfigError("config key " + key + ": expected true/false/1/0, got: " + v);
}

// Applies file values into cfg, skipping any key whose flag was passed on the
// command line (flags override the file). sub == nullptr means no flags.
void apply_config_file(RunConfig& cfg, const std::string& path, const CLI::App* sub) {
    const auto given = [sub](const std::string& flag) {
        if (sub == nullptr) return false;
        const auto* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    for (const auto& [key, value] : read_config_file(path)) {
        if (key == "approach") {
            if (!given("--approach")) cfg.approach = value;
        } else if (key == "mode") {
            if (!given("--mode")) cfg.mode = value;
        } else if (key == "omega_bar") {
            if (!given("--omega-bar")) cfg.omega_bar = parse_double(key, value);
        } else if (key == "g") {
            if (!given("--g")) cfg.g = parse_double(key, value);
        } else if (key == "beta") {
            if (!given("--beta")) cfg.beta = parse_double(key, value);
        } else if (key == "n0") {
            if (!given("--n0")) cfg.n0 = parse_double(key, value);
        } else if (key == "R") {
            if (!given("--R")) { cfg.R = parse_double(key, value); cfg.R_set = true; }
        } else if (key == "c") {
            if (!given("--c")) { cfg.c = parse_double(key, value); cfg.c_set = true; }
        } else if (key == "N") {
            if (!given("--N")) { cfg.N = parse_int(key, value); cfg.N_set = true; }
        } else if (key == "t_start") {
            if (!given("--t-start")) cfg.t_start = parse_double(key, value);
        } else if (key == "t_end") {
            if (!given("--t-end")) cfg.t_end = parse_double(key, value);
        } else if (key == "steps") {
            if (!given("--steps")) cfg.steps = parse_int(key, value);
        } else if (key == "log_grid") {
            if (!given("--log-grid")) cfg.log_grid = parse_bool(key, value);
        } else if (key == "abs_tol") {
            if (!given("--abs-tol")) cfg.abs_tol = parse_double(key, value);
        } else if (key == "rel_tol") {
            if (!given("--rel-tol")) cfg.rel_tol = parse_double(key, value);
        } else if (key == "output") {
            if (!given("--output")) cfg.output = value;
        } else {
            throw ConfigError(path + ": unknown config key: " + key);
        }
    }
}

void validate_run(const RunConfig& cfg) {
    if (cfg.approach != "bare" && cfg.approach != "dressed")
        throw ConfigError("approach must be bare or dressed, got: " + cfg.approach);
    if (cfg.mode != "cavity" && cfg.mode != "continuum")
        throw ConfigError("mode must be cavity or continuum, got: " + cfg.mode);
    if (!(cfg.t_start < cfg.t_end))
        throw ConfigError("t_start must be less than t_end");
    if (cfg.steps < 2) throw ConfigError("steps must be at least 2");
    if (cfg.log_grid && !(cfg.t_start > 0))
        throw ConfigError("log grid requires t_start > 0");
    if (!(cfg.abs_tol > 0) || !(cfg.rel_tol > 0))
        throw ConfigError("abs_tol and rel_tol must be positive");
    const bool cavity_flags = cfg.R_set || cfg.c_set || cfg.N_set;
    if (cfg.mode == "cavity") {
        if (!cfg.R_set || !cfg.N_set)
            throw ConfigError("cavity mode requires --R and --N");
        if (!(cfg.R > 0) || !(cfg.c > 0)) throw ConfigError("R and c must be positive");
        if (cfg.N < 1) throw ConfigError("N must be at least 1");
    } else if (cavity_flags) {
        throw ConfigError("--R/--c/--N apply only to cavity mode");
    }
}

PhysParams physical_params(const RunConfig& cfg) {
    PhysParams p;
    p.omega_bar = cfg.omega_bar;
    p.g = cfg.g;
    p.beta = cfg.beta;
    p.n0_init = cfg.n0;
    return p;
}

oscbath::quad::QuadratureSpec quadrature_spec(const RunConfig& cfg) {
    oscbath::quad::QuadratureSpec spec;
    spec.abs_tol = cfg.abs_tol;
    spec.rel_tol = cfg.rel_tol;
    return spec;
}

// Endpoints are pinned exactly so that rerunning a config reproduces the grid
// bit for bit.
std::vector<double> time_grid(const RunConfig& cfg) {
    std::vector<double> ts(static_cast<std::size_t>(cfg.steps));
    const double span = cfg.t_end - cfg.t_start;
    const double denom = static_cast<double>(cfg.steps - 1);
    for (int i = 0; i < cfg.steps; ++i) {
        if (cfg.log_grid) {
            ts[static_cast<std::size_t>(i)] =
                cfg.t_start * std::pow(cfg.t_end / cfg.t_start, static_cast<double>(i) / denom);
        } else {
            ts[static_cast<std::size_t>(i)] = cfg.t_start + span * static_cast<double>(i) / denom;
        }
    }
    ts.front() = cfg.t_start;
    ts.back() = cfg.t_end;
    return ts;
}

std::vector<OccupationPoint> run_trajectory(const RunConfig& cfg, const std::vector<double>& ts) {
    const PhysParams params = physical_params(cfg);
    params.validate();
    const auto spec = quadrature_spec(cfg);
    std::optional<oscbath::NormalModeBasis> basis;
    if (cfg.mode == "cavity") {
        oscbath::CavityConfig cavity;
        cavity.R = cfg.R;
        cavity.c = cfg.c;
        cavity.N = cfg.N;
        basis = oscbath::solve_spectrum(cavity, params, oscbath::SpectrumMethod::FiniteSecular);
    }
    std::vector<OccupationPoint> rows;
    rows.reserve(ts.size());
    for (const double t : ts) {
        try {
            if (cfg.mode == "cavity") {
                rows.push_back(cfg.approach == "bare"
                                   ? oscbath::occupation_bare_finite(*basis, params, t)
                                   : oscbath::occupation_dressed_finite(*basis, params, t));
            } else {
                rows.push_back(cfg.approach == "bare"
                                   ? oscbath::occupation_bare_renormalized(params, t, spec)
                                   : oscbath::occupation_dressed_continuum(params, t, spec));
            }
        } catch (const oscbath::QuadratureError& e) {
            throw oscbath::QuadratureError("at t = " + fmt_shortest(t) + ": " + e.what());
        }
    }
    return rows;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

std::string occupation_csv(const std::vector<OccupationPoint>& rows) {
    std::string csv = "t,n0,term_memory,term_thermal,term_vacuum\n";
    for (const auto& row : rows) {
        csv += fmt_shortest(row.t);
        csv += ',';
        csv += fmt_shortest(row.total);
        csv += ',';
        csv += fmt_shortest(row.memory_term);
        csv += ',';
        csv += fmt_shortest(row.thermal_term);
        csv += ',';
        csv += fmt_shortest(row.vacuum_term);
        csv += '\n';
    }
    return csv;
}

// The sidecar holds the effective configuration: defaults, file values, and
// flags already merged. Rereading it with --config reproduces the run.
std::string effective_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "# effective configuration; rerun with: oscbath simulate --config <this file>\n";
    out << "approach = " << cfg.approach << "\n";
    out << "mode = " << cfg.mode << "\n";
    out << "omega_bar = " << fmt_shortest(cfg.omega_bar) << "\n";
    out << "g = " << fmt_shortest(cfg.g) << "\n";
    out << "beta = " << fmt_shortest(cfg.beta) << "\n";
    out << "n0 = " << fmt_shortest(cfg.n0) << "\n";
    if (cfg.mode == "cavity") {
        out << "R = " << fmt_shortest(cfg.R) << "\n";
        out << "c = " << fmt_shortest(cfg.c) << "\n";
        out << "N = " << cfg.N << "\n";
    }
    out << "t_start = " << fmt_shortest(cfg.t_start) << "\n";
    out << "t_end = " << fmt_shortest(cfg.t_end) << "\n";
    out << "steps = " << cfg.steps << "\n";
    out << "log_grid = " << (cfg.log_grid ? "true" : "false") << "\n";
    out << "abs_tol = " << fmt_shortest(cfg.abs_tol) << "\n";
    out << "rel_tol = " << fmt_shortest(cfg.rel_tol) << "\n";
    out << "output = " << cfg.output << "\n";
    return out.str();
}

std::string basename_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string plot_script(const RunConfig& cfg) {
    const std::string csv_name = basename_of(cfg.output);
    std::string stem = csv_name;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
        stem.erase(stem.size() - 4);
    std::ostringstream out;
    out << "#!/usr/bin/env python3\n";
    out << "# Plots the trajectory next to this script. Needs matplotlib.\n";
    out << "import csv\n\n";
    out << "import matplotlib\n";
    out << "matplotlib.use(\"Agg\")\n";
    out << "import matplotlib.pyplot as plt\n\n";
    out << "cols = {name: [] for name in (\"t\", \"n0\", \"term_memory\", \"term_thermal\")}\n";
    out << "with open(\"" << csv_name << "\", newline=\"\") as fh:\n";
    out << "    for row in csv.DictReader(fh):\n";
    out << "        for name, values in cols.items():\n";
    out << "            values.append(float(row[name]))\n\n";
    out << "fig, ax = plt.subplots(figsize=(6.4, 4.2))\n";
    out << "ax.plot(cols[\"t\"], cols[\"n0\"], lw=1.4, label=\"n0(t)\")\n";
    out << "ax.plot(cols[\"t\"], cols[\"term_memory\"], lw=0.9, ls=\"--\", label=\"memory\")\n";
    out << "ax.plot(cols[\"t\"], cols[\"term_thermal\"], lw=0.9, ls=\"--\", label=\"thermal\")\n";
    out << "ax.set_xlabel(\"t\")\n";
    out << "ax.set_ylabel(\"occupation number\")\n";
    out << "ax.set_title(\"" << cfg.approach << "/" << cfg.mode
        << "  omega_bar=" << fmt_shortest(cfg.omega_bar) << " g=" << fmt_shortest(cfg.g)
        << " beta=" << fmt_shortest(cfg.beta) << "\")\n";
    if (cfg.log_grid) out << "ax.set_xscale(\"log\")\n";
    out << "ax.legend()\n";
    out << "fig.tight_layout()\n";
    out << "fig.savefig(\"" << stem << ".png\", dpi=160)\n";
    out << "print(\"wrote " << stem << ".png\")\n";
    return out.str();
}

int cmd_simulate(const RunConfig& cfg) {
    validate_run(cfg);
    const auto ts = time_grid(cfg);
    const auto rows = run_trajectory(cfg, ts);
    write_file(cfg.output, occupation_csv(rows));
    write_file(cfg.output + ".config", effective_config(cfg));
    write_file(cfg.output + ".plot.py", plot_script(cfg));
    std::printf("wrote %zu points to %s (+ .config, .plot.py)\n", rows.size(), cfg.output.c_str());
    return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
    if (cfg.mode != "cavity")
        throw ConfigError("spectrum operates on a finite cavity; got mode = " + cfg.mode);
    if (!cfg.R_set || !cfg.N_set) throw ConfigError("spectrum requires --R and --N");
    if (!(cfg.R > 0) || !(cfg.c > 0)) throw ConfigError("R and c must be positive");
    if (cfg.N < 1) throw ConfigError("N must be at least 1");
    // omega_bar = 0 passes through to the solver, which reports the runaway
    // spectrum as a stability error. Negative values are plain config errors:
    // the secular problem sees only omega_bar^2 and would silently solve the
    // mirrored scenario.
    if (!std::isfinite(cfg.omega_bar) || cfg.omega_bar < 0)
        throw ConfigError("omega_bar must be nonnegative");
    if (!std::isfinite(cfg.g) || cfg.g < 0) throw ConfigError("g must be nonnegative");
    oscbath::CavityConfig cavity;
    cavity.R = cfg.R;
    cavity.c = cfg.c;
    cavity.N = cfg.N;
    const PhysParams params = physical_params(cfg);
    const auto basis =
        oscbath::solve_spectrum(cavity, params, oscbath::SpectrumMethod::FiniteSecular);
    std::string csv = "r,Omega_r,t0_r\n";
    for (std::size_t r = 0; r < basis.Omegas.size(); ++r) {
        csv += std::to_string(r);
        csv += ',';
        csv += fmt_sig17(basis.Omegas[r]);
        csv += ',';
        csv += fmt_sig17(basis.t0[r]);
        csv += '\n';
    }
    write_file(cfg.output, csv);
    std::printf("wrote %zu modes to %s\n", basis.Omegas.size(), cfg.output.c_str());
    return 0;
}

int cmd_verify(const std::string& level_name, bool inject_fault, const RunConfig& cfg) {
    if (!(cfg.abs_tol > 0) || !(cfg.rel_tol > 0))
        throw ConfigError("abs_tol and rel_tol must be positive");
    const auto level =
        level_name == "full" ? oscbath::VerifyLevel::Full : oscbath::VerifyLevel::Fast;
    const auto results = oscbath::run_acceptance(level, quadrature_spec(cfg), inject_fault);
    int passed = 0;
    for (const auto& r : results) {
        std::printf("criterion %d %s  %s\n    %s\n", r.id, r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.detail.c_str());
        if (r.pass) ++passed;
    }
    std::printf("passed %d of %zu criteria (%s level)\n", passed, results.size(),
                level_name.c_str());
    return oscbath::all_passed(results) ? 0 : 1;
}

int cmd_compare(RunConfig cfg_a, RunConfig cfg_b, const std::string& output) {
    validate_run(cfg_a);
    validate_run(cfg_b);
    const bool same_grid = cfg_a.t_start == cfg_b.t_start && cfg_a.t_end == cfg_b.t_end &&
                           cfg_a.steps == cfg_b.steps && cfg_a.log_grid == cfg_b.log_grid;
    if (!same_grid) throw ConfigError("compare requires matching time grids");
    const auto ts = time_grid(cfg_a);
    const auto rows_a = run_trajectory(cfg_a, ts);
    const auto rows_b = run_trajectory(cfg_b, ts);
    std::string csv = "t,abs_diff\n";
    double max_diff = 0.0;
    double max_t = ts.front();
    double sum = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double diff = std::fabs(rows_a[i].total - rows_b[i].total);
        csv += fmt_shortest(ts[i]);
        csv += ',';
        csv += fmt_shortest(diff);
        csv += '\n';
        sum += diff;
        if (diff > max_diff) {
            max_diff = diff;
            max_t = ts[i];
        }
    }
    write_file(output, csv);
    std::printf("%s/%s vs %s/%s over %zu points\n", cfg_a.approach.c_str(), cfg_a.mode.c_str(),
                cfg_b.approach.c_str(), cfg_b.mode.c_str(), ts.size());
    std::printf("max |diff| = %s at t = %s\n", fmt_shortest(max_diff).c_str(),
                fmt_shortest(max_t).c_str());
    std::printf("mean |diff| = %s\n", fmt_shortest(sum / static_cast<double>(ts.size())).c_str());
    return 0;
}

// Scenario flags shared by simulate and compare. cavity == true also exposes
// the cavity block and the mode switch.
void add_scenario_options(CLI::App* sub, RunConfig& cfg, bool cavity) {
    sub->add_option("--omega-bar", cfg.omega_bar, "Renormalized oscillator frequency")
        ->capture_default_str();
    sub->add_option("--g", cfg.g, "Coupling strength")->capture_default_str();
    sub->add_option("--beta", cfg.beta, "Inverse bath temperature")->capture_default_str();
    sub->add_option("--n0", cfg.n0, "Initial particle occupation")->capture_default_str();
    sub->add_option("--t-start", cfg.t_start, "First grid time")->capture_default_str();
    sub->add_option("--t-end", cfg.t_end, "Last grid time")->capture_default_str();
    sub->add_option("--steps", cfg.steps, "Number of grid points")->capture_default_str();
    sub->add_flag("--log-grid", cfg.log_grid, "Geometric time grid (requires t_start > 0)");
    sub->add_option("--abs-tol", cfg.abs_tol, "Quadrature absolute tolerance")
        ->capture_default_str();
    sub->add_option("--rel-tol", cfg.rel_tol, "Quadrature relative tolerance")
        ->capture_default_str();
    if (cavity) {
        sub->add_option("--approach", cfg.approach, "bare or dressed")
            ->check(CLI::IsMember({"bare", "dressed"}))
            ->capture_default_str();
        sub->add_option("--mode", cfg.mode, "continuum or cavity")
            ->check(CLI::IsMember({"continuum", "cavity"}))
            ->capture_default_str();
        sub->add_option("--R", cfg.R, "Cavity radius (cavity mode)");
        sub->add_option("--c", cfg.c, "Wave speed (cavity mode)");
        sub->add_option("--N", cfg.N, "Number of bath modes (cavity mode)");
    }
}

void mark_cavity_flags(const CLI::App* sub, RunConfig& cfg) {
    const auto given = [sub](const std::string& flag) {
        const auto* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    cfg.R_set = cfg.R_set || given("--R");
    cfg.c_set = cfg.c_set || given("--c");
    cfg.N_set = cfg.N_set || given("--N");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Occupation dynamics of an oscillator coupled to a bosonic bath"};
    app.require_subcommand(1);

    RunConfig sim_cfg;
    sim_cfg.output = "occupation.csv";
    std::string sim_config_path;
    auto* sim = app.add_subcommand("simulate", "Sample an occupation trajectory to CSV");
    add_scenario_options(sim, sim_cfg, true);
    sim->add_option("--output", sim_cfg.output, "CSV output path")->capture_default_str();
    sim->add_option("--config", sim_config_path, "Flat key = value config file")
        ->check(CLI::ExistingFile);

    RunConfig spec_cfg;
    spec_cfg.mode = "cavity";
    spec_cfg.output = "spectrum.csv";
    std::string spec_config_path;
    auto* spect = app.add_subcommand("spectrum", "Solve a finite cavity and emit its modes");
    spect->add_option("--omega-bar", spec_cfg.omega_bar, "Renormalized oscillator frequency")
        ->capture_default_str();
    spect->add_option("--g", spec_cfg.g, "Coupling strength")->capture_default_str();
    spect->add_option("--R", spec_cfg.R, "Cavity radius");
    spect->add_option("--c", spec_cfg.c, "Wave speed");
    spect->add_option("--N", spec_cfg.N, "Number of bath modes");
    spect->add_option("--output", spec_cfg.output, "CSV output path")->capture_default_str();
    spect->add_option("--config", spec_config_path, "Flat key = value config file")
        ->check(CLI::ExistingFile);

    RunConfig verify_cfg;
    std::string verify_level = "fast";
    bool inject_fault = false;
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--level", verify_level, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}))
        ->capture_default_str();
    verify->add_flag("--inject-fault", inject_fault,
                     "Tamper with a tolerance to prove failures are detected");
    verify->add_option("--abs-tol", verify_cfg.abs_tol, "Quadrature absolute tolerance")
        ->capture_default_str();
    verify->add_option("--rel-tol", verify_cfg.rel_tol, "Quadrature relative tolerance")
        ->capture_default_str();

    RunConfig cmp_shared;
    RunConfig cmp_a;
    cmp_a.approach = "bare";
    RunConfig cmp_b;
    cmp_b.approach = "dressed";
    std::string cmp_config_a;
    std::string cmp_config_b;
    std::string cmp_approach_a;
    std::string cmp_approach_b;
    std::string cmp_output = "compare.csv";
    auto* cmp = app.add_subcommand("compare", "Run two scenarios and emit |difference|");
    add_scenario_options(cmp, cmp_shared, false);
    cmp->add_option("--config-a", cmp_config_a, "Config file for scenario A (default: bare)")
        ->check(CLI::ExistingFile);
    cmp->add_option("--config-b", cmp_config_b, "Config file for scenario B (default: dressed)")
        ->check(CLI::ExistingFile);
    cmp->add_option("--approach-a", cmp_approach_a, "Override approach for scenario A")
        ->check(CLI::IsMember({"bare", "dressed"}));
    cmp->add_option("--approach-b", cmp_approach_b, "Override approach for scenario B")
        ->check(CLI::IsMember({"bare", "dressed"}));
    cmp->add_option("--output", cmp_output, "Difference CSV path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            if (!sim_config_path.empty()) apply_config_file(sim_cfg, sim_config_path, sim);
            mark_cavity_flags(sim, sim_cfg);
            return cmd_simulate(sim_cfg);
        }
        if (spect->parsed()) {
            if (!spec_config_path.empty()) apply_config_file(spec_cfg, spec_config_path, spect);
            spec_cfg.mode = "cavity";
            mark_cavity_flags(spect, spec_cfg);
            return cmd_spectrum(spec_cfg);
        }
        if (verify->parsed()) return cmd_verify(verify_level, inject_fault, verify_cfg);
        if (cmp->parsed()) {
            if (!cmp_config_a.empty()) apply_config_file(cmp_a, cmp_config_a, nullptr);
            if (!cmp_config_b.empty()) apply_config_file(cmp_b, cmp_config_b, nullptr);
            const auto shared_given = [cmp](const std::string& flag) {
                const auto* opt = cmp->get_option_no_throw(flag);
                return opt != nullptr && opt->count() > 0;
            };
            const auto apply_shared = [&](RunConfig& cfg) {
                if (shared_given("--omega-bar")) cfg.omega_bar = cmp_shared.omega_bar;
                if (shared_given("--g")) cfg.g = cmp_shared.g;
                if (shared_given("--beta")) cfg.beta = cmp_shared.beta;
                if (shared_given("--n0")) cfg.n0 = cmp_shared.n0;
                if (shared_given("--t-start")) cfg.t_start = cmp_shared.t_start;
                if (shared_given("--t-end")) cfg.t_end = cmp_shared.t_end;
                if (shared_given("--steps")) cfg.steps = cmp_shared.steps;
                if (shared_given("--log-grid")) cfg.log_grid = cmp_shared.log_grid;
                if (shared_given("--abs-tol")) cfg.abs_tol = cmp_shared.abs_tol;
                if (shared_given("--rel-tol")) cfg.rel_tol = cmp_shared.rel_tol;
            };
            apply_shared(cmp_a);
            apply_shared(cmp_b);
            if (!cmp_approach_a.empty()) cmp_a.approach = cmp_approach_a;
            if (!cmp_approach_b.empty()) cmp_b.approach = cmp_approach_b;
            return cmd_compare(cmp_a, cmp_b, cmp_output);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const oscbath::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const oscbath::StrongCouplingError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const oscbath::QuadratureError& e) {
        std::fprintf(stderr, "quadrature failure: %s\n", e.what());
        return 3;
    } catch (const oscbath::StabilityError& e) {
        std::fprintf(stderr, "stability error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
