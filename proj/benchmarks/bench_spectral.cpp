#include <benchmark/benchmark.h>

#include "snslab/ou_noise.hpp"
#include "snslab/solver.hpp"
#include "snslab/spectral_ops.hpp"

using namespace snslab;

static void BM_RoundTripTransform(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpectralField u = random_field(n, 1, 1, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(from_physical(to_physical(u)));
}
BENCHMARK(BM_RoundTripTransform)->Arg(32)->Arg(64)->Arg(128);

static void BM_NonlinearSelf(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpectralField u = random_field(n, 1, 1, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(nonlinear_B(u));
}
BENCHMARK(BM_NonlinearSelf)->Arg(32)->Arg(64)->Arg(128);

static void BM_NonlinearGeneral(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpectralField u = random_field(n, 1, 1, 1.0);
    const SpectralField v = random_field(n, 1, 2, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(nonlinear_B(u, v));
}
BENCHMARK(BM_NonlinearGeneral)->Arg(32)->Arg(64);

static void BM_Step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ScenarioConfig cfg;
    cfg.n = n;
    cfg.forcing = Forcing::example(sin_pair(n, 2, 1.0));
    cfg.h = SpectralField(n);
    const auto z = noise::ou_from_wiener(noise::sample_wiener(1, -10.0, 1.0, 0.01), cfg.sigma);
    const Stepper stepper(cfg, 0.02);
    const SpectralField v = random_field(n, 1, 1, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(stepper.step(v, -1.0, z));
}
BENCHMARK(BM_Step)->Arg(32)->Arg(64);

static void BM_OuPath(benchmark::State& state) {
    for (auto _ : state) {
        const auto w = noise::sample_wiener(7, -200.0, 10000.0, 0.05);
        benchmark::DoNotOptimize(noise::ou_from_wiener(w, 1.0));
    }
}
BENCHMARK(BM_OuPath)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
