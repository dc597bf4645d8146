#pragma once

#include "dvac/evolution.hpp"
#include "dvac/params.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dvac {

enum class SumMode { Analytic, Numeric };

[[nodiscard]] std::string to_string(SumMode mode);
[[nodiscard]] SumMode sum_mode_from_string(const std::string& name);

/// Energy change of the negative-energy sea, sum over |r| <= R of the (-1, r) shifts.
struct VacuumReport {
    PhysicalParams params;
    SumMode mode = SumMode::Analytic;
    int r_sum = 0;                                  ///< largest cutoff used
    std::vector<std::pair<int, double>> partial_sums; ///< (R, Delta xi) including q^2
    double limit_analytic = 0.0;                    ///< -4 pi q^2 k_w^2 L
    double relative_error = 0.0;                    ///< |final - limit| / |limit|
    double matched_analytic = 0.0;                  ///< q^2 partial_vacuum_sum(r_sum)
    std::vector<EnergyShiftRecord> per_mode;        ///< numeric mode, ascending r

    [[nodiscard]] double final_value() const {
        return partial_sums.empty() ? 0.0 : partial_sums.back().second;
    }
};

/// q^2 partial_vacuum_sum(R) for each R in R_list (non-empty, strictly ascending, >= w).
[[nodiscard]] VacuumReport vacuum_shift_analytic(const PhysicalParams& params,
                                                 std::span<const int> R_list);

/// Evolves every (-1, r), |r| <= r_sum, in parallel and sums the shifts in ascending r.
/// partial_sums holds the symmetric cumulative sums for R = 0..r_sum.
[[nodiscard]] VacuumReport vacuum_shift_numeric(const PhysicalParams& params, int r_sum,
                                                const TimeGrid& grid, int band);

struct QScalingFit {
    double exponent = 0.0;     ///< least-squares slope of log|delta_e| vs log|q|
    double coefficient = 0.0;  ///< signed exp(intercept), compare with delta_e2(base)
    double max_odd_fraction = 0.0; ///< max |de(q) - de(-q)| / |de(q) + de(-q)|
    std::vector<double> q;
    std::vector<double> delta_e;          ///< at +q
    std::vector<double> delta_e_negative; ///< at -q
    std::vector<EnergyShiftRecord> records; ///< +q runs then -q runs
};

/// Runs the base mode at each q and -q and fits the power law. Needs at least four
/// distinct nonzero |q|. Throws FitError if the shifts disagree in sign.
[[nodiscard]] QScalingFit q_scaling_fit(const PhysicalParams& params,
                                        std::span<const double> q_list, ModeLabel base,
                                        const TimeGrid& grid, int band);

} // namespace dvac
