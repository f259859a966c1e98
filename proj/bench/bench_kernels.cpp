// OpenMP kernels against their serial references, plus the scaling of the
// recurrence and of the dense Liouvillian solve.
//
//   qdcav_bench --benchmark_filter=Sweep     criteria sweep, serial vs parallel
//   qdcav_bench --benchmark_filter=Profile   Phi profile, serial vs parallel
//   qdcav_bench --benchmark_filter=Scaling   recurrence O(N) and dense solve

#include <benchmark/benchmark.h>

#include "qdcav/charfunc.hpp"
#include "qdcav/criteria.hpp"
#include "qdcav/oracle.hpp"

namespace {

using namespace qdcav;

const std::vector<double>& sweep_grid() {
    static const auto grid = log_grid(1e8, 1e14, 121);
    return grid;
}

void BM_SweepSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(preset("setB"), sweep_grid(), {}));
}

void BM_SweepParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sweep(preset("setB"), sweep_grid(), {}));
}

const std::vector<double>& alpha_grid() {
    static const auto grid = linear_grid(0.0, 100.0, 512);
    return grid;
}

void BM_ProfileSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(profile_serial(preset("setA"), alpha_grid()));
}

void BM_ProfileParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(profile(preset("setA"), alpha_grid()));
}

void BM_ScalingRecurrence(benchmark::State& state) {
    const RecurrenceCoeffs<double> c(normalize(preset("setA")));
    for (auto _ : state) benchmark::DoNotOptimize(recurrence_kernel(c, state.range(0)));
    state.SetComplexityN(state.range(0));
}

void BM_ScalingDense(benchmark::State& state) {
    const SystemParams prm = preset("setA");
    for (auto _ : state) benchmark::DoNotOptimize(steady_state_dense(prm, state.range(0)).rho(0, 0));
    state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ProfileSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScalingRecurrence)
    ->RangeMultiplier(10)
    ->Range(10'000, 10'000'000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);
BENCHMARK(BM_ScalingDense)->DenseRange(10, 25, 5)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oAuto);

BENCHMARK_MAIN();
