// Serial reference vs OpenMP execution of the data-parallel kernels.

#include <benchmark/benchmark.h>

#include <numbers>

#include "nlv/checks.hpp"
#include "nlv/simulate.hpp"

using namespace nlv;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_LemmaScan(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(checks::scan_lemma(100000, 1, 16, mode(state)));
    }
    label(state);
}
BENCHMARK(BM_LemmaScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LeggettBoundary(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(checks::scan_leggett_boundary(100000, 1, mode(state)));
    }
    label(state);
}
BENCHMARK(BM_LeggettBoundary)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExplicitModelSearch(benchmark::State& state) {
    const auto pairs =
        leggett::measured_pairs(sphere::default_frames(), 2, 15 * std::numbers::pi / 180);
    for (auto _ : state) {
        benchmark::DoNotOptimize(checks::search_explicit_model(pairs, 2.0, mode(state)));
    }
    label(state);
}
BENCHMARK(BM_ExplicitModelSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Replicate(benchmark::State& state) {
    const simulate::ExperimentConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate::replicate(config, 4, 15 * std::numbers::pi / 180, 1000, mode(state)));
    }
    label(state);
}
BENCHMARK(BM_Replicate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
