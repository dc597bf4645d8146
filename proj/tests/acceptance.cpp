// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "dvac/evolution.hpp"
#include "dvac/mode_basis.hpp"
#include "dvac/perturbation.hpp"
#include "dvac/vacuum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

using namespace dvac;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double rel(double value, double target) { return std::abs(value - target) / std::abs(target); }

constexpr ModeLabel vac(int r) { return {Branch::Negative, r}; }

TimeGrid acceptance_grid() {
    TimeGrid g;
    g.T = 500.0;
    return g;
}
constexpr int band = 3;

// norm drift of every evolution in criteria 5-7
double max_drift = 0.0;
std::size_t evolutions = 0;

void track(const std::vector<EnergyShiftRecord>& records) {
    for (const auto& rec : records) {
        max_drift = std::max(max_drift, rec.stats.norm_drift);
        ++evolutions;
    }
}

Outcome basis_suite() {
    const PhysicalParams p;
    const double orth = check_orthonormality(p, 100);
    const double eig = check_eigen_relation(p, 100);
    return {orth < 1e-12 && eig < 1e-12,
            fmt("orthonormality dev %.2e, eigen-relation dev %.2e (limit 1e-12, |r| <= 100)", orth,
                eig)};
}

Outcome oracle_equivalence() {
    const PhysicalParams p;
    double worst = 0.0;
    int worst_r = 0;
    for (int r = -50; r <= 50; ++r) {
        const double e = rel(delta_e2_via_amplitudes(vac(r), p), delta_e2(vac(r), p));
        if (e > worst) {
            worst = e;
            worst_r = r;
        }
    }
    return {worst < 1e-10, fmt("max relative difference %.2e at r = %d (limit 1e-10, |r| <= 50)",
                               worst, worst_r)};
}

Outcome negativity() {
    const PhysicalParams p;
    double largest = -1e300;
    for (int r = -200; r <= 200; ++r) largest = std::max(largest, delta_e2(vac(r), p));
    return {largest < 0.0, fmt("largest delta_e2 over |r| <= 200 is %.6g", largest)};
}

Outcome limit() {
    const PhysicalParams p;
    const double target = -8.0 * pi * pi;
    const double s10 = partial_vacuum_sum(10, p);
    const double s100 = partial_vacuum_sum(100, p);
    const double e10 = rel(s10, target);
    const double e100 = rel(s100, target);
    const bool ok = std::abs(analytic_limit(p) - target) <= 1e-13 * std::abs(target) &&
                    e10 < 2e-2 && e100 < 2.5e-4 && rel(s10, -77.554) < 1e-5 &&
                    rel(s100, -78.941) < 1e-5;
    return {ok, fmt("S(10) = %.6f (rel %.3e < 2e-2), S(100) = %.6f (rel %.3e < 2.5e-4), "
                    "limit %.6f",
                    s10, e10, s100, e100, analytic_limit(p))};
}

Outcome dynamics_vs_theory() {
    PhysicalParams p;
    p.q = 0.01;
    const double targets[] = {-17.656, -13.958, -7.596};
    std::vector<ShiftJob> jobs;
    for (int r : {0, 1, 2}) jobs.push_back({vac(r), p, acceptance_grid(), band});
    const auto records = run_shift_jobs(jobs);
    track(records);
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double per_q2 = records[i].delta_e_numeric / (p.q * p.q);
        const double e = rel(per_q2, targets[i]);
        ok = ok && e < 0.05 && rel(records[i].delta_e2_analytic, targets[i]) < 1e-4;
        detail += fmt("%s(-1,%d): %.4f vs %.3f (%.2f%%)", i ? ", " : "", records[i].label.r, per_q2,
                      targets[i], 100.0 * e);
    }
    return {ok, detail};
}

Outcome q_squared_law() {
    const PhysicalParams p;
    const std::vector<double> qs{0.0025, 0.005, 0.01, 0.02};
    const QScalingFit fit = q_scaling_fit(p, qs, vac(0), acceptance_grid(), band);
    track(fit.records);
    const bool ok = fit.exponent >= 1.95 && fit.exponent <= 2.05 && fit.max_odd_fraction < 0.01;
    return {ok, fmt("slope %.5f (in [1.95, 2.05]), odd/even %.2e (< 1e-2), coefficient %.4f",
                    fit.exponent, fit.max_odd_fraction, fit.coefficient)};
}

Outcome vacuum_extraction() {
    PhysicalParams p;
    p.q = 0.01;
    const VacuumReport rep = vacuum_shift_numeric(p, 5, acceptance_grid(), band);
    track(rep.per_mode);
    const double value = rep.final_value();
    const double q2 = p.q * p.q;
    const double e_matched = rel(value, rep.matched_analytic);
    const double e_stated = rel(value, q2 * -75.03);
    const bool ok = value < 0.0 && e_matched < 0.05 && e_stated < 0.05;
    return {ok, fmt("Delta xi/q^2 = %.4f, matched telescoped sum %.4f (%.2f%%), "
                    "quoted -75.03 (%.2f%%)",
                    value / q2, rep.matched_analytic / q2, 100.0 * e_matched, 100.0 * e_stated)};
}

Outcome unitarity() {
    return {evolutions > 0 && max_drift < 1e-8,
            fmt("max norm drift %.2e over %zu evolutions (limit 1e-8)", max_drift, evolutions)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s; ///< 0 = no runtime requirement
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "basis suite", 1.0, basis_suite},
        {2, "oracle equivalence", 1.0, oracle_equivalence},
        {3, "negativity", 1.0, negativity},
        {4, "vacuum sum limit", 1.0, limit},
        {5, "dynamics vs theory", 0.0, dynamics_vs_theory},
        {6, "q^2 law", 120.0, q_squared_law},
        {7, "vacuum extraction", 600.0, vacuum_extraction},
        {8, "unitarity", 0.0, unitarity},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = Clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::string timing = fmt("%.2f s", secs);
        if (c.budget_s > 0.0) {
            timing += fmt(" (budget %.0f s)", c.budget_s);
            out.pass = out.pass && secs < c.budget_s;
        }
        if (!out.pass) ++failures;
        std::printf("%s %d %s: %s; %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
