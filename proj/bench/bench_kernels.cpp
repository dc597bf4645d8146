// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to compare thread counts.

#include "dvac/evolution.hpp"
#include "dvac/mode_basis.hpp"
#include "dvac/perturbation.hpp"
#include "dvac/serial_reference.hpp"
#include "dvac/vacuum.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace dvac;

namespace {

TimeGrid short_grid() {
    TimeGrid g;
    g.T = 100.0;
    g.stepper = Stepper::Dopri5;
    return g;
}

void BM_Orthonormality_Serial(benchmark::State& state) {
    const PhysicalParams p;
    for (auto _ : state) benchmark::DoNotOptimize(serial::check_orthonormality(p, static_cast<int>(state.range(0))));
}

void BM_Orthonormality_Omp(benchmark::State& state) {
    const PhysicalParams p;
    for (auto _ : state) benchmark::DoNotOptimize(check_orthonormality(p, static_cast<int>(state.range(0))));
}

void BM_PerturbationTable_Serial(benchmark::State& state) {
    const PhysicalParams p;
    for (auto _ : state) benchmark::DoNotOptimize(serial::perturbation_table(p, static_cast<int>(state.range(0))));
}

void BM_PerturbationTable_Omp(benchmark::State& state) {
    const PhysicalParams p;
    for (auto _ : state) benchmark::DoNotOptimize(perturbation_table(p, static_cast<int>(state.range(0))));
}

std::vector<ShiftJob> shift_jobs(int r_sum) {
    const PhysicalParams p;
    std::vector<ShiftJob> jobs;
    for (int r = -r_sum; r <= r_sum; ++r) jobs.push_back({{Branch::Negative, r}, p, short_grid(), 3});
    return jobs;
}

void BM_ShiftJobs_Serial(benchmark::State& state) {
    const auto jobs = shift_jobs(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::run_shift_jobs(jobs));
}

void BM_ShiftJobs_Omp(benchmark::State& state) {
    const auto jobs = shift_jobs(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_shift_jobs(jobs));
}

void BM_VacuumNumeric_Serial(benchmark::State& state) {
    const PhysicalParams p;
    for (auto _ : state) benchmark::DoNotOptimize(serial::vacuum_shift_numeric(p, 2, short_grid(), 3));
}

void BM_VacuumNumeric_Omp(benchmark::State& state) {
    const PhysicalParams p;
    for (auto _ : state) benchmark::DoNotOptimize(vacuum_shift_numeric(p, 2, short_grid(), 3));
}

} // namespace

BENCHMARK(BM_Orthonormality_Serial)->Arg(1000)->Arg(100000);
BENCHMARK(BM_Orthonormality_Omp)->Arg(1000)->Arg(100000);
BENCHMARK(BM_PerturbationTable_Serial)->Arg(50)->Arg(500);
BENCHMARK(BM_PerturbationTable_Omp)->Arg(50)->Arg(500);
BENCHMARK(BM_ShiftJobs_Serial)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShiftJobs_Omp)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VacuumNumeric_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VacuumNumeric_Omp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
