#include "commands.hpp"

#include "dvac/drive.hpp"
#include "dvac/errors.hpp"
#include "dvac/evolution.hpp"
#include "dvac/mode_basis.hpp"
#include "dvac/perturbation.hpp"
#include "dvac/serial_reference.hpp"
#include "dvac/vacuum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace dvac::cli {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

class CsvWriter {
public:
    explicit CsvWriter(std::initializer_list<std::string> header) {
        bool first = true;
        for (const std::string& h : header) {
            if (!first) os_ << ',';
            os_ << h;
            first = false;
        }
        os_ << '\n';
    }

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((put(cells, first)), ...);
        os_ << '\n';
    }

    [[nodiscard]] std::string str() const { return os_.str(); }

private:
    void put(double v, bool& first) { sep(first), os_ << format_double(v); }
    void put(int v, bool& first) { sep(first), os_ << v; }
    void put(std::size_t v, bool& first) { sep(first), os_ << v; }
    void put(const std::string& v, bool& first) { sep(first), os_ << v; }
    void sep(bool& first) {
        if (!first) os_ << ',';
        first = false;
    }
    std::ostringstream os_;
};

json label_json(ModeLabel l) { return json{{"lambda", sign(l.branch)}, {"r", l.r}}; }

json record_json(const EnergyShiftRecord& rec) {
    return json{{"label", label_json(rec.label)},
                {"q", rec.q},
                {"delta_e_numeric", rec.delta_e_numeric},
                {"delta_e2_analytic", rec.delta_e2_analytic},
                {"ratio", rec.ratio},
                {"diagnostics",
                 {{"norm_drift", rec.stats.norm_drift},
                  {"T", rec.T},
                  {"band", rec.band},
                  {"steps", rec.stats.steps},
                  {"rejected_steps", rec.stats.rejected},
                  {"dt_initial", rec.stats.dt_initial}}}};
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    out << text;
}

} // namespace

std::string render_csv(const RunConfig& cfg, const std::string& csv) {
    return std::string("# ") + tool_name + " " + tool_version + " config: " + to_json(cfg).dump() +
           "\n" + csv;
}

json envelope(const RunConfig& cfg, const std::string& command, const Payload& payload) {
    return json{{"tool", tool_name},       {"version", tool_version},
                {"command", command},      {"timestamp", timestamp_utc()},
                {"config", to_json(cfg)},  {"payload", payload.data}};
}

void emit(const RunConfig& cfg, const std::string& command, const Payload& payload,
          std::ostream& out) {
    const Format f = cfg.output.format;
    const bool csv = f == Format::Csv || f == Format::Both;
    const bool js = f == Format::Json || f == Format::Both;
    if (cfg.output.path == "-") {
        if (payload.trace_csv) {
            throw ConfigError("a time-series trace needs --output to name a file stem");
        }
        if (csv) out << render_csv(cfg, payload.csv);
        if (csv && js) out << '\n';
        if (js) out << envelope(cfg, command, payload).dump(2) << '\n';
        return;
    }
    if (csv) write_file(cfg.output.path + ".csv", render_csv(cfg, payload.csv));
    if (js) write_file(cfg.output.path + ".json", envelope(cfg, command, payload).dump(2) + "\n");
    if (payload.trace_csv) {
        write_file(cfg.output.path + ".trace.csv", render_csv(cfg, *payload.trace_csv));
    }
}

Payload cmd_spectrum(const RunConfig& cfg) {
    cfg.validate();
    CsvWriter csv({"lambda", "r", "p", "E", "eps0"});
    json rows = json::array();
    for (int r = -cfg.r_max; r <= cfg.r_max; ++r) {
        for (Branch b : {Branch::Negative, Branch::Positive}) {
            const FreeMode mode = free_mode({b, r}, cfg.physical);
            csv.row(sign(b), r, mode.p, mode.E, mode.eps0);
            rows.push_back({{"lambda", sign(b)}, {"r", r}, {"p", mode.p}, {"E", mode.E},
                            {"eps0", mode.eps0}});
        }
    }
    return {csv.str(), json{{"rows", rows}}, std::nullopt};
}

Payload cmd_potential(const RunConfig& cfg) {
    cfg.validate();
    CsvWriter csv({"z", "t", "V"});
    json samples = json::array();
    const double L = cfg.physical.L;
    for (int i = 0; i < cfg.z_points; ++i) {
        const double z = -0.5 * L + L * i / cfg.z_points;
        for (int k = 0; k < cfg.t_points; ++k) {
            const double t = cfg.t_points == 1
                                 ? cfg.t_min
                                 : cfg.t_min + (cfg.t_max - cfg.t_min) * k / (cfg.t_points - 1);
            const double v = sample_potential(z, t, cfg.physical);
            csv.row(z, t, v);
            samples.push_back({z, t, v});
        }
    }
    return {csv.str(), json{{"columns", {"z", "t", "V"}}, {"samples", samples}}, std::nullopt};
}

Payload cmd_perturb(const RunConfig& cfg) {
    cfg.validate();
    const std::vector<PerturbationRow> table = perturbation_table(cfg.physical, cfg.r_max);
    CsvWriter csv({"r", "delta_e2", "via_amplitudes", "partial_sum"});
    json rows = json::array();
    for (const PerturbationRow& row : table) {
        csv.row(row.r, row.delta_e2, row.via_amplitudes, row.partial_sum);
        rows.push_back({{"r", row.r},
                        {"delta_e2", row.delta_e2},
                        {"via_amplitudes", row.via_amplitudes},
                        {"partial_sum", row.partial_sum}});
    }
    json sums = json::array();
    for (int R : cfg.r_list) {
        sums.push_back({{"R", R}, {"partial_sum", partial_vacuum_sum(R, cfg.physical)}});
    }
    json data{{"units", "per q^2"},
              {"analytic_limit", analytic_limit(cfg.physical)},
              {"partial_sums", sums},
              {"rows", rows}};
    return {csv.str(), data, std::nullopt};
}

Payload cmd_shift(const RunConfig& cfg) {
    cfg.validate();
    const ModeLabel base{branch_from_sign(cfg.lambda), cfg.r};

    std::optional<CsvWriter> trace_csv;
    TraceSink sink;
    if (cfg.trace_every > 0) {
        const Truncation trunc = build_truncation(base, cfg.band, cfg.physical, cfg.grid.edge_margin);
        std::ostringstream header;
        header << "t,norm";
        for (ModeLabel l : trunc.labels) header << ",abs2_l" << sign(l.branch) << "_r" << l.r;
        trace_csv.emplace(std::initializer_list<std::string>{header.str()});
        sink.every = static_cast<std::size_t>(cfg.trace_every);
        sink.observe = [&trace_csv](double t, std::span<const cplx> c) {
            double norm = 0.0;
            std::string line = format_double(t);
            std::string cells;
            for (const cplx& x : c) {
                norm += std::norm(x);
                cells += "," + format_double(std::norm(x));
            }
            trace_csv->row(line + "," + format_double(norm) + cells);
        };
    }
    const EnergyShiftRecord rec =
        measure_shift(base, cfg.physical, cfg.grid, cfg.band, trace_csv ? &sink : nullptr);

    CsvWriter csv({"lambda", "r", "q", "T", "band", "delta_e_numeric", "delta_e2_analytic",
                   "ratio", "norm_drift", "steps"});
    csv.row(sign(base.branch), base.r, rec.q, rec.T, rec.band, rec.delta_e_numeric,
            rec.delta_e2_analytic, rec.ratio, rec.stats.norm_drift, rec.stats.steps);
    Payload out{csv.str(), record_json(rec), std::nullopt};
    if (trace_csv) out.trace_csv = trace_csv->str();
    return out;
}

Payload cmd_vacuum(const RunConfig& cfg) {
    cfg.validate();
    const SumMode mode = sum_mode_from_string(cfg.mode);
    const VacuumReport report =
        mode == SumMode::Analytic
            ? vacuum_shift_analytic(cfg.physical, cfg.r_list)
            : vacuum_shift_numeric(cfg.physical, cfg.r_sum, cfg.grid, cfg.band);
    const double q2 = cfg.physical.q * cfg.physical.q;

    CsvWriter csv({"R", "delta_xi", "analytic_partial"});
    json sums = json::array();
    for (const auto& [R, value] : report.partial_sums) {
        const double analytic = q2 * (R >= cfg.physical.w ? partial_vacuum_sum(R, cfg.physical)
                                                          : partial_vacuum_sum_naive(R, cfg.physical));
        csv.row(R, value, analytic);
        sums.push_back({{"R", R}, {"delta_xi", value}, {"analytic_partial", analytic}});
    }
    json per_mode = json::array();
    for (const EnergyShiftRecord& rec : report.per_mode) per_mode.push_back(record_json(rec));
    json data{{"mode", to_string(report.mode)},
              {"R_sum", report.r_sum},
              {"partial_sums", sums},
              {"final_value", report.final_value()},
              {"matched_analytic", report.matched_analytic},
              {"limit_analytic", report.limit_analytic},
              {"relative_error", report.relative_error},
              {"per_mode", per_mode}};
    return {csv.str(), data, std::nullopt};
}

Payload cmd_sweep_q(const RunConfig& cfg) {
    cfg.validate();
    const ModeLabel base{branch_from_sign(cfg.lambda), cfg.r};
    const QScalingFit fit = q_scaling_fit(cfg.physical, cfg.q_list, base, cfg.grid, cfg.band);
    const double analytic = delta_e2(base, cfg.physical);

    CsvWriter csv({"q", "delta_e", "delta_e_at_minus_q", "delta_e_over_q2", "ratio"});
    json points = json::array();
    for (std::size_t i = 0; i < fit.q.size(); ++i) {
        const double q = fit.q[i];
        const double per_q2 = fit.delta_e[i] / (q * q);
        csv.row(q, fit.delta_e[i], fit.delta_e_negative[i], per_q2, per_q2 / analytic);
        points.push_back({{"q", q},
                          {"delta_e", fit.delta_e[i]},
                          {"delta_e_at_minus_q", fit.delta_e_negative[i]}});
    }
    json data{{"label", label_json(base)},
              {"exponent", fit.exponent},
              {"coefficient", fit.coefficient},
              {"delta_e2_analytic", analytic},
              {"coefficient_ratio", fit.coefficient / analytic},
              {"max_odd_fraction", fit.max_odd_fraction},
              {"points", points}};
    return {csv.str(), data, std::nullopt};
}

bool CheckReport::all_passed() const {
    if (outcomes.empty()) return false;
    for (const CheckOutcome& o : outcomes) {
        if (!o.pass) return false;
    }
    return true;
}

std::string CheckReport::table() const {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-36s %-6s %-14s %-14s\n", "invariant", "result", "value",
                  "threshold");
    os << line;
    for (const CheckOutcome& o : outcomes) {
        std::snprintf(line, sizeof line, "%-36s %-6s %-14.6g %-14.6g %s\n", o.name.c_str(),
                      o.pass ? "PASS" : "FAIL", o.value, o.threshold, o.detail.c_str());
        os << line;
    }
    os << (all_passed() ? "all invariants hold\n" : "INVARIANT VIOLATION\n");
    return os.str();
}

Payload CheckReport::payload() const {
    CsvWriter csv({"invariant", "pass", "value", "threshold"});
    json items = json::array();
    for (const CheckOutcome& o : outcomes) {
        csv.row(o.name, std::string(o.pass ? "1" : "0"), o.value, o.threshold);
        items.push_back({{"invariant", o.name},
                         {"pass", o.pass},
                         {"value", o.value},
                         {"threshold", o.threshold},
                         {"detail", o.detail}});
    }
    return {csv.str(), json{{"all_passed", all_passed()}, {"checks", items}}, std::nullopt};
}

namespace {

// value <= threshold passes; a thrown exception fails the check with its message.
void run_check(CheckReport& report, const std::string& name, double threshold,
               const std::function<double()>& measure) {
    CheckOutcome o{name, false, std::nan(""), threshold, ""};
    try {
        o.value = measure();
        o.pass = std::isfinite(o.value) && o.value <= threshold;
    } catch (const std::exception& e) {
        o.detail = e.what();
    }
    report.outcomes.push_back(o);
}

} // namespace

CheckReport cmd_check(const RunConfig& cfg) {
    cfg.validate();
    const PhysicalParams& params = cfg.physical;
    CheckReport report;
    constexpr int basis_r = 100;

    run_check(report, "basis.orthonormality", 1e-12,
              [&] { return check_orthonormality(params, basis_r); });
    run_check(report, "basis.eigen_relation", 1e-12,
              [&] { return check_eigen_relation(params, basis_r); });
    run_check(report, "basis.normalization", 1e-14, [&] {
        double worst = 0.0;
        for (int r = -basis_r; r <= basis_r; ++r) {
            for (Branch b : {Branch::Negative, Branch::Positive}) {
                const FreeMode mode = free_mode({b, r}, params);
                worst = std::max(worst, std::abs(params.L * std::real(inner(mode.u, mode.u)) - 1.0));
            }
        }
        return worst;
    });
    run_check(report, "basis.reflection_symmetry", 0.0, [&] {
        double worst = 0.0;
        for (int r = 0; r <= basis_r; ++r) {
            worst = std::max(worst, std::abs(energy(r, params) - energy(-r, params)));
            const double a = free_mode({Branch::Negative, r}, params).eps0;
            const double b = free_mode({Branch::Positive, r}, params).eps0;
            worst = std::max(worst, std::abs(a + b));
        }
        return worst;
    });
    run_check(report, "drive.coupling_hermitian_selection", 1e-13, [&] {
        double worst = 0.0;
        constexpr int span = 10;
        for (int r = -span; r <= span; ++r) {
            for (int s = -span; s <= span; ++s) {
                for (Branch a : {Branch::Negative, Branch::Positive}) {
                    for (Branch b : {Branch::Negative, Branch::Positive}) {
                        const cplx ab = coupling({a, r}, {b, s}, params).value;
                        const cplx ba = coupling({b, s}, {a, r}, params).value;
                        worst = std::max(worst, std::abs(ab - std::conj(ba)));
                        if (std::abs(r - s) != params.w) worst = std::max(worst, std::abs(ab));
                    }
                }
            }
        }
        return worst;
    });
    run_check(report, "perturb.first_order_zero", 0.0, [&] {
        double worst = 0.0;
        for (int r = -50; r <= 50; ++r) {
            worst = std::max(worst, std::abs(delta_e1({Branch::Negative, r}, params)));
        }
        return worst;
    });
    run_check(report, "perturb.oracle_agreement", 1e-10, [&] {
        double worst = 0.0;
        for (int r = -50; r <= 50; ++r) {
            const ModeLabel l{Branch::Negative, r};
            const double closed = delta_e2(l, params);
            worst = std::max(worst, std::abs(closed - delta_e2_via_amplitudes(l, params,
                                                                              cfg.grid.edge_margin)) /
                                        std::abs(closed));
        }
        return worst;
    });
    run_check(report, "perturb.negativity", 0.0, [&] {
        double largest = -std::numeric_limits<double>::infinity();
        for (int r = -200; r <= 200; ++r) {
            largest = std::max(largest, delta_e2({Branch::Negative, r}, params));
        }
        // passes when every shift is strictly negative
        return largest < 0.0 ? 0.0 : 1.0 + largest;
    });
    run_check(report, "perturb.branch_antisymmetry", 0.0, [&] {
        double worst = 0.0;
        for (int r = -200; r <= 200; ++r) {
            worst = std::max(worst, std::abs(delta_e2({Branch::Positive, r}, params) +
                                              delta_e2({Branch::Negative, r}, params)));
        }
        return worst;
    });
    const int R_top = cfg.r_list.back();
    const double p_low = momentum(R_top - params.w + 1, params);
    run_check(report, "perturb.limit_boundary_bound",
              params.m * params.m / (2.0 * p_low * p_low), [&] {
                  const double limit = analytic_limit(params);
                  return std::abs(partial_vacuum_sum(R_top, params) - limit) / std::abs(limit);
              });
    run_check(report, "perturb.partial_sums_monotone", 0.0, [&] {
        double violations = 0.0;
        double previous = 0.0;
        for (int R : cfg.r_list) {
            const double magnitude = std::abs(partial_vacuum_sum(R, params));
            if (magnitude <= previous) violations += 1.0;
            previous = magnitude;
        }
        if (previous > std::abs(analytic_limit(params))) violations += 1.0;
        return violations;
    });
    run_check(report, "perturb.telescoped_vs_naive", 1e-10, [&] {
        const int R = std::max(params.w, 100);
        const double tele = partial_vacuum_sum(R, params);
        return std::abs(tele - partial_vacuum_sum_naive(R, params)) / std::abs(tele);
    });
    run_check(report, "kernels.serial_parallel_identical", 0.0, [&] {
        double mismatches = 0.0;
        if (check_orthonormality(params, basis_r) != serial::check_orthonormality(params, basis_r)) {
            mismatches += 1.0;
        }
        const auto par = perturbation_table(params, 50);
        const auto ser = serial::perturbation_table(params, 50);
        for (std::size_t i = 0; i < par.size(); ++i) {
            if (par[i].delta_e2 != ser[i].delta_e2 || par[i].via_amplitudes != ser[i].via_amplitudes ||
                par[i].partial_sum != ser[i].partial_sum) {
                mismatches += 1.0;
            }
        }
        return mismatches;
    });

    const ModeLabel vac0{Branch::Negative, 0};
    run_check(report, "evolution.zero_coupling_identity", 0.0, [&] {
        PhysicalParams p0 = params;
        p0.q = 0.0;
        return std::abs(measure_shift(vac0, p0, cfg.grid, cfg.band).delta_e_numeric);
    });

    PhysicalParams driven = params;
    if (driven.q == 0.0) driven.q = 0.01;
    std::optional<EnergyShiftRecord> plus;
    run_check(report, "evolution.dynamics_vs_theory", 0.05, [&] {
        plus = measure_shift(vac0, driven, cfg.grid, cfg.band);
        return std::abs(plus->ratio - 1.0);
    });
    run_check(report, "evolution.unitarity", cfg.grid.norm_bound, [&] {
        if (!plus) throw ToleranceError("driven evolution did not complete");
        return plus->stats.norm_drift;
    });
    run_check(report, "evolution.even_in_q", 0.01, [&] {
        if (!plus) throw ToleranceError("driven evolution did not complete");
        PhysicalParams flipped = driven;
        flipped.q = -driven.q;
        const double minus = measure_shift(vac0, flipped, cfg.grid, cfg.band).delta_e_numeric;
        return std::abs(plus->delta_e_numeric - minus) / std::abs(plus->delta_e_numeric + minus);
    });
    run_check(report, "evolution.branch_mirror", 0.05, [&] {
        if (!plus) throw ToleranceError("driven evolution did not complete");
        const double positive =
            measure_shift({Branch::Positive, 0}, driven, cfg.grid, cfg.band).delta_e_numeric;
        return std::abs(positive + plus->delta_e_numeric) / std::abs(plus->delta_e_numeric);
    });
    return report;
}

} // namespace dvac::cli
