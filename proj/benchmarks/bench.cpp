#include "levyspde/error_engine.hpp"
#include "levyspde/mittag_leffler.hpp"
#include "levyspde/propagators.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace levyspde;

static void BM_MittagLeffler(benchmark::State& state) {
    const auto ml = mittag_leffler_evaluator(1.5);
    const double x = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize((*ml)(x));
    }
}
BENCHMARK(BM_MittagLeffler)->Arg(5)->Arg(35)->Arg(5000);

static void BM_CqModeSolve(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const auto w = cq_weights(1.5, 1.0 / N, N);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cq_mode_solve(50.0, w, N, {}, 1.0));
    }
    state.SetComplexityN(N);
}
BENCHMARK(BM_CqModeSolve)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);

static void BM_AssembleFem(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_fem(M));
    }
}
BENCHMARK(BM_AssembleFem)->Arg(32)->Arg(128);

static void BM_HeatTemporalErrors(benchmark::State& state) {
    Setup s;
    s.kind = EquationKind::heat();
    s.spectrum = dirichlet_spectrum(static_cast<int>(state.range(0)));
    s.covariance = CovarianceSpec::power_law(1.0, 0.55);
    s.step = 1.0 / 256;
    for (auto _ : state) {
        benchmark::DoNotOptimize(deterministic_errors(s));
    }
}
BENCHMARK(BM_HeatTemporalErrors)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
    Setup s;
    s.kind = EquationKind::heat();
    s.spectrum = dirichlet_spectrum(64);
    s.covariance = CovarianceSpec::power_law(1.0, 0.55);
    s.law = CompoundPoisson{5.0};
    s.step = 1.0 / 16;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_weak_error(s, TestFunction::quadratic(), 1000, 1));
    }
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
