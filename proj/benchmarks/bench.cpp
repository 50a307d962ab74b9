#include "radialbc/deltadiag.hpp"
#include "radialbc/rsolve.hpp"

#include <benchmark/benchmark.h>

using namespace radialbc;

namespace {

RadialProblem coulomb() {
    RadialProblem p;
    p.potential = Coulomb{1.0};
    return p;
}

void BM_NumerovSweep(benchmark::State& state) {
    auto p = coulomb();
    p.grid.n_points = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerov_sweep(p, -0.5, Direction::Outward));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NumerovSweep)->Arg(2000)->Arg(12000)->Arg(48000);

void BM_FindLevel(benchmark::State& state) {
    const auto p = coulomb();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_level(p, n));
    }
}
BENCHMARK(BM_FindLevel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_FindLevelKg(benchmark::State& state) {
    auto p = coulomb();
    p.potential = Coulomb{0.2};
    p.relativistic = true;
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_level(p, 0));
    }
}
BENCHMARK(BM_FindLevelKg)->Unit(benchmark::kMillisecond);

void BM_SphereResidualPower(benchmark::State& state) {
    const CandidateU c{PowerForm{1.0, 0.0}, 0, -0.5, Coulomb{1.0}, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sphere_residual(c, 1e-2));
    }
}
BENCHMARK(BM_SphereResidualPower);

void BM_SphereResidualSampled(benchmark::State& state) {
    const auto p = coulomb();
    const auto s = find_level(p, 0);
    const auto c = sampled_candidate(s, 0, s.level.energy, p.potential, p.mass);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sphere_residual(c, 1e-2));
    }
}
BENCHMARK(BM_SphereResidualSampled)->Unit(benchmark::kMicrosecond);

} // namespace
BENCHMARK_MAIN();
