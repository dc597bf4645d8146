#include "dvac/vacuum.hpp"

#include "dvac/errors.hpp"
#include "dvac/perturbation.hpp"
#include "dvac/serial_reference.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dvac {

std::string to_string(SumMode mode) { return mode == SumMode::Analytic ? "analytic" : "numeric"; }

SumMode sum_mode_from_string(const std::string& name) {
    if (name == "analytic") return SumMode::Analytic;
    if (name == "numeric") return SumMode::Numeric;
    throw ConfigError("unknown vacuum mode '" + name + "' (expected analytic or numeric)");
}

namespace {

double relative_to(double value, double target) {
    if (target == 0.0) return value == 0.0 ? 0.0 : std::abs(value);
    return std::abs(value - target) / std::abs(target);
}

std::vector<ShiftJob> vacuum_jobs(const PhysicalParams& params, int r_sum, const TimeGrid& grid,
                                  int band) {
    if (r_sum < 0) throw ConfigError("r_sum must be non-negative");
    params.validate();
    grid.validate();
    std::vector<ShiftJob> jobs;
    for (int r = -r_sum; r <= r_sum; ++r) jobs.push_back({{Branch::Negative, r}, params, grid, band});
    return jobs;
}

VacuumReport assemble_numeric(const PhysicalParams& params, int r_sum,
                              std::vector<EnergyShiftRecord> records) {
    VacuumReport report;
    report.params = params;
    report.mode = SumMode::Numeric;
    report.r_sum = r_sum;
    const double q2 = params.q * params.q;
    report.limit_analytic = q2 * analytic_limit(params);
    report.matched_analytic =
        q2 * (r_sum >= params.w ? partial_vacuum_sum(r_sum, params)
                                : partial_vacuum_sum_naive(r_sum, params));
    // Fixed order: centre first, then each symmetric pair, so the result does not
    // depend on how the fan-out was scheduled.
    const auto centre = static_cast<std::size_t>(r_sum);
    double running = records[centre].delta_e_numeric;
    report.partial_sums.emplace_back(0, running);
    for (int R = 1; R <= r_sum; ++R) {
        running += records[centre - static_cast<std::size_t>(R)].delta_e_numeric;
        running += records[centre + static_cast<std::size_t>(R)].delta_e_numeric;
        report.partial_sums.emplace_back(R, running);
    }
    report.relative_error = relative_to(report.final_value(), report.limit_analytic);
    report.per_mode = std::move(records);
    return report;
}

} // namespace

VacuumReport vacuum_shift_analytic(const PhysicalParams& params, std::span<const int> R_list) {
    params.validate();
    if (R_list.empty()) throw ConfigError("R list must not be empty");
    if (!std::is_sorted(R_list.begin(), R_list.end(), std::less_equal<>{})) {
        throw ConfigError("R list must be strictly ascending");
    }
    VacuumReport report;
    report.params = params;
    report.mode = SumMode::Analytic;
    report.r_sum = R_list.back();
    const double q2 = params.q * params.q;
    for (int R : R_list) report.partial_sums.emplace_back(R, q2 * partial_vacuum_sum(R, params));
    report.limit_analytic = q2 * analytic_limit(params);
    report.matched_analytic = report.final_value();
    report.relative_error = relative_to(report.final_value(), report.limit_analytic);
    return report;
}

VacuumReport vacuum_shift_numeric(const PhysicalParams& params, int r_sum, const TimeGrid& grid,
                                  int band) {
    const std::vector<ShiftJob> jobs = vacuum_jobs(params, r_sum, grid, band);
    return assemble_numeric(params, r_sum, run_shift_jobs(jobs));
}

namespace serial {

VacuumReport vacuum_shift_numeric(const PhysicalParams& params, int r_sum, const TimeGrid& grid,
                                  int band) {
    const std::vector<ShiftJob> jobs = vacuum_jobs(params, r_sum, grid, band);
    return assemble_numeric(params, r_sum, serial::run_shift_jobs(jobs));
}

} // namespace serial

QScalingFit q_scaling_fit(const PhysicalParams& params, std::span<const double> q_list,
                          ModeLabel base, const TimeGrid& grid, int band) {
    std::set<double> magnitudes;
    for (double q : q_list) {
        if (!std::isfinite(q) || q == 0.0) throw ConfigError("q values must be finite and nonzero");
        magnitudes.insert(std::abs(q));
    }
    if (magnitudes.size() < 4) throw ConfigError("q-scaling fit needs at least 4 distinct |q|");

    QScalingFit fit;
    fit.q.assign(q_list.begin(), q_list.end());
    std::vector<ShiftJob> jobs;
    for (int s : {1, -1}) {
        for (double q : q_list) {
            PhysicalParams p = params;
            p.q = s * q;
            jobs.push_back({base, p, grid, band});
        }
    }
    fit.records = run_shift_jobs(jobs);
    const std::size_t n = q_list.size();
    for (std::size_t i = 0; i < n; ++i) {
        fit.delta_e.push_back(fit.records[i].delta_e_numeric);
        fit.delta_e_negative.push_back(fit.records[n + i].delta_e_numeric);
    }

    const bool negative = fit.delta_e.front() < 0.0;
    for (double d : fit.delta_e) {
        if (d == 0.0 || (d < 0.0) != negative) {
            throw FitError("energy shifts change sign across the q sweep; not in the "
                           "perturbative regime");
        }
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(std::abs(fit.q[i]));
        const double y = std::log(std::abs(fit.delta_e[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        const double even = fit.delta_e[i] + fit.delta_e_negative[i];
        const double odd = fit.delta_e[i] - fit.delta_e_negative[i];
        fit.max_odd_fraction = std::max(fit.max_odd_fraction, std::abs(odd) / std::abs(even));
    }
    const double dn = static_cast<double>(n);
    fit.exponent = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    const double intercept = (sy - fit.exponent * sx) / dn;
    fit.coefficient = (negative ? -1.0 : 1.0) * std::exp(intercept);
    return fit;
}

} // namespace dvac
