#include <benchmark/benchmark.h>

#include <fpade/equilibrium.hpp>

using namespace fpade;

static void BM_EquilibriumC1(benchmark::State& state)
{
    const auto C = interaction_matrix_linear(RayVector({0.5, 0.5}));
    const auto intervals = equilibrium_intervals(reference_system());
    const auto grid = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(C, intervals, grid, 1e-6));
}
BENCHMARK(BM_EquilibriumC1)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_EquilibriumC2(benchmark::State& state)
{
    const auto C = interaction_matrix_nonlinear(RayVector({0.5, 0.5}));
    const auto intervals = equilibrium_intervals(reference_system());
    const auto grid = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(C, intervals, grid, 1e-6));
}
BENCHMARK(BM_EquilibriumC2)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_PrincipalMinors(benchmark::State& state)
{
    const RayVector p({0.2, 0.3, 0.5});
    const auto C = interaction_matrix_nonlinear(p);
    for (auto _ : state) benchmark::DoNotOptimize(principal_minors(C, p));
}
BENCHMARK(BM_PrincipalMinors);
