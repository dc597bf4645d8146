#include "dvac/evolution.hpp"

#include "dvac/drive.hpp"
#include "dvac/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

namespace odeint = boost::numeric::odeint;

namespace dvac {

namespace {

using State = std::vector<cplx>;

std::string label_text(ModeLabel l) {
    return "(" + std::to_string(sign(l.branch)) + "," + std::to_string(l.r) + ")";
}

// Right-hand side of the interaction-picture equations. The coupling is kept in
// CSR form: row a lists the (b, M_ab) with M_ab = <a| 4 cos(k_w z) |b>.
class InteractionPicture {
public:
    InteractionPicture(const Truncation& trunc, const PhysicalParams& params)
        : q_(params.q), m_(params.m) {
        const std::size_t n = trunc.size();
        eps_.reserve(n);
        for (ModeLabel l : trunc.labels) eps_.push_back(free_mode(l, params).eps0);
        row_start_.push_back(0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                const cplx element = coupling(trunc.labels[b], trunc.labels[a], params).value;
                if (element != cplx{0.0, 0.0}) {
                    col_.push_back(b);
                    value_.push_back(element);
                    max_gap_ = std::max(max_gap_, std::abs(eps_[a] - eps_[b]));
                }
            }
            row_start_.push_back(col_.size());
        }
        phase_.resize(n);
        rotated_.resize(n);
    }

    void operator()(const State& c, State& dcdt, double t) const {
        const double drive = q_ * time_profile(t, m_);
        const std::size_t n = eps_.size();
        for (std::size_t b = 0; b < n; ++b) {
            phase_[b] = std::polar(1.0, eps_[b] * t);
            rotated_[b] = std::conj(phase_[b]) * c[b];
        }
        for (std::size_t a = 0; a < n; ++a) {
            cplx acc{0.0, 0.0};
            for (std::size_t k = row_start_[a]; k < row_start_[a + 1]; ++k) {
                acc += value_[k] * rotated_[col_[k]];
            }
            dcdt[a] = cplx{0.0, -drive} * phase_[a] * acc;
        }
    }

    [[nodiscard]] double max_gap() const { return max_gap_; }

private:
    double q_;
    double m_;
    std::vector<double> eps_;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> col_;
    std::vector<cplx> value_;
    double max_gap_ = 0.0;
    mutable std::vector<cplx> phase_;
    mutable std::vector<cplx> rotated_;
};

double squared_norm(const State& c) {
    double s = 0.0;
    for (const cplx& x : c) s += std::norm(x);
    return s;
}

void integrate_rk4(const InteractionPicture& system, State& c, double T, double dt_max,
                   EvolutionStats& stats, const TraceSink* trace) {
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * T / dt_max));
    const double dt = 2.0 * T / static_cast<double>(n);
    stats.dt_initial = dt;
    odeint::runge_kutta4<State> stepper;
    for (std::size_t i = 0; i < n; ++i) {
        // t from the step index keeps the grid free of accumulated rounding.
        const double t = -T + static_cast<double>(i) * dt;
        stepper.do_step(std::cref(system), c, t, dt);
        ++stats.steps;
        if (trace && (i + 1) % trace->every == 0 && i + 1 < n) {
            trace->observe(-T + static_cast<double>(i + 1) * dt, c);
        }
    }
}

void integrate_dopri5(const InteractionPicture& system, State& c, double T, double dt_max,
                      double abs_tol, double rel_tol, EvolutionStats& stats,
                      const TraceSink* trace) {
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(abs_tol, rel_tol);
    double t = -T;
    double dt = dt_max;
    stats.dt_initial = dt;
    while (t < T) {
        const bool last = dt >= T - t;
        double step = last ? T - t : dt;
        // try_step advances t and overwrites step with the controller's next proposal.
        if (stepper.try_step(std::cref(system), c, t, step) == odeint::success) {
            ++stats.steps;
            if (last) {
                t = T;
            } else if (trace && stats.steps % trace->every == 0) {
                trace->observe(t, c);
            }
        } else {
            ++stats.rejected;
        }
        dt = step;
        if (dt < std::numeric_limits<double>::epsilon() * T) {
            throw ToleranceError("adaptive step size underflow at t = " + std::to_string(t));
        }
    }
}

} // namespace

std::optional<std::size_t> Truncation::index_of(ModeLabel label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
}

Truncation build_truncation(ModeLabel base, int band, const PhysicalParams& params,
                            double margin_fraction) {
    if (band < 1) throw ConfigError("band B must be at least 1");
    params.validate();
    require_clear_of_band_edge(base, params, margin_fraction);
    Truncation trunc{base, band, {}};
    trunc.labels.reserve(static_cast<std::size_t>(2 * (2 * band + 1)));
    for (Branch b : {Branch::Negative, Branch::Positive}) {
        for (int j = -band; j <= band; ++j) trunc.labels.push_back({b, base.r + j * params.w});
    }
    return trunc;
}

std::string to_string(Stepper s) { return s == Stepper::Rk4 ? "rk4" : "dopri5"; }

Stepper stepper_from_string(const std::string& name) {
    if (name == "rk4") return Stepper::Rk4;
    if (name == "dopri5") return Stepper::Dopri5;
    throw ConfigError("unknown stepper '" + name + "' (expected rk4 or dopri5)");
}

void TimeGrid::validate() const {
    if (!std::isfinite(T) || !(T > 0.0)) throw ConfigError("half-window T must be positive");
    if (!std::isfinite(dt) || dt < 0.0) throw ConfigError("dt must be >= 0 (0 = automatic)");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (!(norm_bound > 0.0)) throw ConfigError("norm bound must be positive");
    if (!(edge_margin >= 0.0) || !(edge_margin < 1.0)) {
        throw ConfigError("band-edge margin must lie in [0, 1)");
    }
}

double ModeState::norm() const { return squared_norm(c); }

EvolutionResult evolve_mode(ModeLabel base, const PhysicalParams& params, const TimeGrid& grid,
                            int band, const TraceSink* trace) {
    grid.validate();
    EvolutionResult result;
    result.state.trunc = build_truncation(base, band, params, grid.edge_margin);
    State& c = result.state.c;
    c.assign(result.state.trunc.size(), cplx{0.0, 0.0});
    c[result.state.trunc.base_index()] = 1.0;
    result.state.t = -grid.T;
    if (trace) trace->observe(-grid.T, c);

    const InteractionPicture system(result.state.trunc, params);
    const double auto_dt = 0.01 / std::max(params.m, system.max_gap());
    const double dt_max = grid.dt > 0.0 ? std::min(grid.dt, 2.0 * grid.T) : auto_dt;

    if (grid.stepper == Stepper::Rk4) {
        integrate_rk4(system, c, grid.T, dt_max, result.stats, trace);
    } else {
        integrate_dopri5(system, c, grid.T, dt_max, grid.abs_tol, grid.rel_tol, result.stats,
                         trace);
    }
    result.state.t = grid.T;
    if (trace) trace->observe(grid.T, c);

    result.stats.norm_drift = std::abs(squared_norm(c) - 1.0);
    if (result.stats.norm_drift > grid.norm_bound) {
        std::ostringstream os;
        os << "norm drift " << result.stats.norm_drift << " exceeds bound " << grid.norm_bound
           << " for mode " << label_text(base) << "; tighten dt or tolerances";
        throw ToleranceError(os.str());
    }
    return result;
}

double energy_shift_numeric(const ModeState& state, const PhysicalParams& params) {
    double energy_after = 0.0;
    for (std::size_t a = 0; a < state.c.size(); ++a) {
        energy_after += std::norm(state.c[a]) * free_mode(state.trunc.labels[a], params).eps0;
    }
    return energy_after - free_mode(state.trunc.base, params).eps0;
}

EnergyShiftRecord measure_shift(ModeLabel base, const PhysicalParams& params,
                                const TimeGrid& grid, int band, const TraceSink* trace) {
    const EvolutionResult run = evolve_mode(base, params, grid, band, trace);
    EnergyShiftRecord rec;
    rec.label = base;
    rec.q = params.q;
    rec.delta_e_numeric = energy_shift_numeric(run.state, params);
    rec.delta_e2_analytic = delta_e2(base, params);
    const double predicted = params.q * params.q * rec.delta_e2_analytic;
    rec.ratio = predicted != 0.0 ? rec.delta_e_numeric / predicted
                                 : std::numeric_limits<double>::quiet_NaN();
    rec.stats = run.stats;
    rec.T = grid.T;
    rec.band = band;
    return rec;
}

namespace {

EnergyShiftRecord run_job(const ShiftJob& job) {
    return measure_shift(job.base, job.params, job.grid, job.band);
}

void rethrow_first_failure(std::span<const ShiftJob> jobs,
                           const std::vector<std::exception_ptr>& errors) {
    std::vector<std::size_t> failed;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i]) failed.push_back(i);
    }
    if (failed.empty()) return;
    std::string which;
    for (std::size_t i : failed) which += " " + label_text(jobs[i].base);
    const std::string suffix = " [failed modes:" + which + "]";
    try {
        std::rethrow_exception(errors[failed.front()]);
    } catch (const BandEdgeError& e) {
        throw BandEdgeError(e.what() + suffix);
    } catch (const ConfigError& e) {
        throw ConfigError(e.what() + suffix);
    } catch (const ToleranceError& e) {
        throw ToleranceError(e.what() + suffix);
    } catch (const std::exception& e) {
        throw std::runtime_error(e.what() + suffix);
    }
}

} // namespace

std::vector<EnergyShiftRecord> run_shift_jobs(std::span<const ShiftJob> jobs) {
    const auto n = static_cast<std::ptrdiff_t>(jobs.size());
    std::vector<EnergyShiftRecord> records(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            records[k] = run_job(jobs[k]);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    rethrow_first_failure(jobs, errors);
    return records;
}

namespace serial {

std::vector<EnergyShiftRecord> run_shift_jobs(std::span<const ShiftJob> jobs) {
    std::vector<EnergyShiftRecord> records(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        try {
            records[k] = run_job(jobs[k]);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    rethrow_first_failure(jobs, errors);
    return records;
}

} // namespace serial

std::vector<ConvergenceRow> convergence_study(ModeLabel base, const PhysicalParams& params,
                                              std::span<const TimeGrid> grids,
                                              std::span<const int> bands) {
    if (grids.empty() || bands.empty()) {
        throw ConfigError("convergence study needs at least one grid and one band");
    }
    std::vector<ShiftJob> jobs;
    for (const TimeGrid& g : grids) {
        for (int b : bands) jobs.push_back({base, params, g, b});
    }
    const std::vector<EnergyShiftRecord> records = run_shift_jobs(jobs);
    std::vector<ConvergenceRow> rows;
    rows.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        ConvergenceRow row;
        row.T = jobs[i].grid.T;
        row.band = jobs[i].band;
        row.stepper = jobs[i].grid.stepper;
        row.dt = records[i].stats.dt_initial;
        row.rel_tol = jobs[i].grid.rel_tol;
        row.delta_e = records[i].delta_e_numeric;
        row.diff_from_previous = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                        : row.delta_e - rows.back().delta_e;
        rows.push_back(row);
    }
    return rows;
}

} // namespace dvac
