#pragma once

// Single-threaded reference versions of the OpenMP kernels. They share the per-item
// work with the parallel versions and must return bitwise-identical results; tests
// and the benchmark compare the two.

#include "dvac/evolution.hpp"
#include "dvac/perturbation.hpp"
#include "dvac/vacuum.hpp"

#include <span>
#include <vector>

namespace dvac::serial {

[[nodiscard]] double check_orthonormality(const PhysicalParams& params, int r_max);

[[nodiscard]] std::vector<PerturbationRow> perturbation_table(const PhysicalParams& params,
                                                              int r_max);

[[nodiscard]] std::vector<EnergyShiftRecord> run_shift_jobs(std::span<const ShiftJob> jobs);

[[nodiscard]] VacuumReport vacuum_shift_numeric(const PhysicalParams& params, int r_sum,
                                                const TimeGrid& grid, int band);

} // namespace dvac::serial
