#pragma once

#include "dvac/mode_basis.hpp"
#include "dvac/params.hpp"
#include "dvac/perturbation.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dvac {

/// Coupled-mode basis around one base label: (lambda', base.r + j w) for |j| <= band,
/// both branches, ordered branch-major then by r.
struct Truncation {
    ModeLabel base;
    int band = 0;
    std::vector<ModeLabel> labels;

    [[nodiscard]] std::size_t size() const { return labels.size(); }
    /// Position of label in labels; nullopt when it lies outside the truncation.
    [[nodiscard]] std::optional<std::size_t> index_of(ModeLabel label) const;
    [[nodiscard]] std::size_t base_index() const { return *index_of(base); }
};

/// Throws ConfigError for band < 1 and BandEdgeError when a first-hop gap of the
/// base lies within margin_fraction * m of the bandlimit.
[[nodiscard]] Truncation build_truncation(ModeLabel base, int band, const PhysicalParams& params,
                                          double margin_fraction = default_edge_margin);

enum class Stepper { Rk4, Dopri5 };

[[nodiscard]] std::string to_string(Stepper s);
[[nodiscard]] Stepper stepper_from_string(const std::string& name);

struct TimeGrid {
    double T = 250.0;          ///< integrate over [-T, T]
    Stepper stepper = Stepper::Rk4;
    double dt = 0.0;           ///< Rk4 step; 0 selects 0.01 / max(m, max |gap|)
    double rel_tol = 1e-10;    ///< Dopri5 only
    double abs_tol = 1e-12;    ///< Dopri5 only
    double norm_bound = 1e-8;  ///< allowed |sum |c|^2 - 1| at the end
    double edge_margin = default_edge_margin; ///< band-edge exclusion, fraction of m

    void validate() const;
    bool operator==(const TimeGrid&) const = default;
};

/// Interaction-picture coefficients c_a of one evolving mode, phi = sum_a c_a phi0_a(z, t).
struct ModeState {
    Truncation trunc;
    double t = 0.0;
    std::vector<cplx> c;

    [[nodiscard]] double norm() const;
};

struct EvolutionStats {
    std::size_t steps = 0;
    std::size_t rejected = 0; ///< Dopri5 only
    double dt_initial = 0.0;
    double norm_drift = 0.0;
};

struct EvolutionResult {
    ModeState state;
    EvolutionStats stats;
};

/// Called with (t, c) at t = -T, every `every` accepted steps, and at t = +T.
struct TraceSink {
    std::function<void(double, std::span<const cplx>)> observe;
    std::size_t every = 1000;
};

/// Integrates i dc_a/dt = q f(t) sum_b M_ab exp(i (eps_a - eps_b) t) c_b from -T to T,
/// starting from c_base = 1. Throws ToleranceError when the final norm drifts by more
/// than grid.norm_bound.
[[nodiscard]] EvolutionResult evolve_mode(ModeLabel base, const PhysicalParams& params,
                                          const TimeGrid& grid, int band,
                                          const TraceSink* trace = nullptr);

/// sum_a |c_a|^2 eps0_a - eps0_base; H0 is diagonal in the free basis.
[[nodiscard]] double energy_shift_numeric(const ModeState& state, const PhysicalParams& params);

struct EnergyShiftRecord {
    ModeLabel label;
    double q = 0.0;
    double delta_e_numeric = 0.0;
    double delta_e2_analytic = 0.0;
    double ratio = 0.0; ///< delta_e_numeric / (q^2 delta_e2_analytic); NaN when undefined
    EvolutionStats stats;
    double T = 0.0;
    int band = 0;
};

/// evolve_mode followed by energy_shift_numeric, compared against delta_e2.
[[nodiscard]] EnergyShiftRecord measure_shift(ModeLabel base, const PhysicalParams& params,
                                              const TimeGrid& grid, int band,
                                              const TraceSink* trace = nullptr);

/// One independent shift computation for the parallel fan-out.
struct ShiftJob {
    ModeLabel base;
    PhysicalParams params;
    TimeGrid grid;
    int band = 3;
};

/// Runs every job (OpenMP-parallel, one job per iteration) and returns records in job
/// order. If any job fails, rethrows the failure of the first failing job with the list
/// of all failing labels attached.
[[nodiscard]] std::vector<EnergyShiftRecord> run_shift_jobs(std::span<const ShiftJob> jobs);

struct ConvergenceRow {
    double T = 0.0;
    int band = 0;
    Stepper stepper = Stepper::Rk4;
    double dt = 0.0;
    double rel_tol = 0.0;
    double delta_e = 0.0;
    double diff_from_previous = 0.0; ///< NaN on the first row
};

/// delta_e over the cartesian product grids x bands (grids outer, bands inner).
[[nodiscard]] std::vector<ConvergenceRow> convergence_study(ModeLabel base,
                                                            const PhysicalParams& params,
                                                            std::span<const TimeGrid> grids,
                                                            std::span<const int> bands);

} // namespace dvac
