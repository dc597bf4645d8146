#include "commands.hpp"
#include "run_config.hpp"

#include "dvac/errors.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>

namespace {

using nlohmann::json;
using namespace dvac;
using namespace dvac::cli;

// Flags that override config-file keys. Each is only applied when given.
struct Overrides {
    std::optional<double> L, m, q, T, dt, rel_tol, abs_tol, norm_bound, edge_margin, t_min, t_max;
    std::optional<int> w, band, r_sum, r_max, lambda, r, z_points, t_points, trace_every, verbosity;
    std::optional<std::string> stepper, mode, format, output;
    std::optional<std::vector<int>> r_list;
    std::optional<std::vector<double>> q_list;

    [[nodiscard]] json as_json() const {
        json j = json::object();
        auto put = [&j](const char* key, const auto& value) {
            if (value) j[key] = *value;
        };
        put("L", L);
        put("m", m);
        put("q", q);
        put("T", T);
        put("dt", dt);
        put("rel_tol", rel_tol);
        put("abs_tol", abs_tol);
        put("norm_bound", norm_bound);
        put("edge_margin", edge_margin);
        put("t_min", t_min);
        put("t_max", t_max);
        put("w", w);
        put("band", band);
        put("r_sum", r_sum);
        put("r_max", r_max);
        put("lambda", lambda);
        put("r", r);
        put("z_points", z_points);
        put("t_points", t_points);
        put("trace_every", trace_every);
        put("verbosity", verbosity);
        put("stepper", stepper);
        put("mode", mode);
        put("format", format);
        put("output", output);
        put("r_list", r_list);
        put("q_list", q_list);
        return j;
    }
};

void add_flags(CLI::App& app, Overrides& o, std::string& config_path) {
    app.add_option("--config", config_path, "flat JSON config file; flags override its keys");
    app.add_option("--L", o.L, "box length");
    app.add_option("--m", o.m, "fermion mass");
    app.add_option("--q", o.q, "coupling constant");
    app.add_option("--w", o.w, "drive harmonic (k_w = 2 pi w / L)");
    app.add_option("--T", o.T, "half-window of the evolution [-T, T] (default 500/m)");
    app.add_option("--band", o.band, "w-hops kept on each side of the base mode");
    app.add_option("--stepper", o.stepper, "rk4 (fixed step) or dopri5 (adaptive)");
    app.add_option("--dt", o.dt, "rk4 step; 0 = 0.01/max(m, max gap)");
    app.add_option("--rtol", o.rel_tol, "dopri5 relative tolerance");
    app.add_option("--atol", o.abs_tol, "dopri5 absolute tolerance");
    app.add_option("--norm-bound", o.norm_bound, "allowed final norm drift");
    app.add_option("--edge-margin", o.edge_margin, "band-edge exclusion as a fraction of m");
    app.add_option("--r-sum", o.r_sum, "symmetric mode cutoff for numeric vacuum sums");
    app.add_option("--r-list", o.r_list, "ascending cutoffs for analytic vacuum sums")->delimiter(',');
    app.add_option("--r-max", o.r_max, "largest |r| in spectrum / perturb tables");
    app.add_option("--mode", o.mode, "vacuum sum mode: analytic or numeric");
    app.add_option("--lambda", o.lambda, "energy sign of the base mode (-1 or 1)");
    app.add_option("--r", o.r, "index of the base mode");
    app.add_option("--q-list", o.q_list, "couplings for sweep-q")->delimiter(',');
    app.add_option("--z-points", o.z_points, "potential: samples over [-L/2, L/2)");
    app.add_option("--t-min", o.t_min, "potential: first time sample");
    app.add_option("--t-max", o.t_max, "potential: last time sample");
    app.add_option("--t-points", o.t_points, "potential: number of time samples");
    app.add_option("--trace-every", o.trace_every, "shift: sample |c|^2 every N steps (0 = off)");
    app.add_option("--format", o.format, "csv, json or both");
    app.add_option("--output", o.output, "file stem, or - for stdout");
    app.add_option("--verbosity", o.verbosity, "diagnostic detail on stderr");
}

RunConfig resolve(const std::string& config_path, const Overrides& o) {
    RunConfig cfg;
    bool has_T = false;
    if (!config_path.empty()) has_T = apply_json(cfg, read_config_file(config_path));
    has_T = apply_json(cfg, o.as_json()) || has_T;
    if (!has_T) cfg.grid.T = 500.0 / cfg.physical.m;
    cfg.validate();
    return cfg;
}

void report_error(const char* kind, const std::exception& e) {
    std::cerr << json{{"error", kind}, {"message", e.what()}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven 1+1D Dirac vacuum: mode dynamics, perturbative shifts and vacuum sums"};
    app.require_subcommand(1);
    Overrides overrides;
    std::string config_path;
    add_flags(app, overrides, config_path);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"spectrum", "free spectrum (lambda, r, p, E, eps0)"},
        {"potential", "sample V(z, t) on a grid"},
        {"perturb", "second-order shifts, amplitude oracle and vacuum partial sums"},
        {"shift", "evolve one mode and measure its energy shift"},
        {"vacuum", "vacuum energy change, analytic or numeric"},
        {"sweep-q", "q-scaling fit of one mode's shift"},
        {"check", "run the invariant suite"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = resolve(config_path, overrides);
        if (cfg.output.verbosity > 0) std::cerr << "config: " << to_json(cfg).dump() << '\n';
        if (command == "check") {
            const CheckReport report = cmd_check(cfg);
            std::cerr << report.table();
            emit(cfg, command, report.payload(), std::cout);
            return report.all_passed() ? exit_ok : exit_invariant;
        }
        Payload payload;
        if (command == "spectrum") payload = cmd_spectrum(cfg);
        else if (command == "potential") payload = cmd_potential(cfg);
        else if (command == "perturb") payload = cmd_perturb(cfg);
        else if (command == "shift") payload = cmd_shift(cfg);
        else if (command == "vacuum") payload = cmd_vacuum(cfg);
        else payload = cmd_sweep_q(cfg);
        emit(cfg, command, payload, std::cout);
        return exit_ok;
    } catch (const BandEdgeError& e) {
        report_error("BandEdgeError", e);
        return exit_config;
    } catch (const ConfigError& e) {
        report_error("ConfigError", e);
        return exit_config;
    } catch (const ToleranceError& e) {
        report_error("ToleranceError", e);
        return exit_numerical;
    } catch (const FitError& e) {
        report_error("FitError", e);
        return exit_numerical;
    } catch (const std::exception& e) {
        report_error("Error", e);
        return exit_failure;
    }
}
