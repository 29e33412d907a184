#include <benchmark/benchmark.h>

#include <fpade/linear_fp.hpp>
#include <fpade/nonlinear_fp.hpp>

using namespace fpade;

static void BM_LinearFP(benchmark::State& state)
{
    const auto sys = reference_system();
    const int h = static_cast<int>(state.range(0));
    const MultiIndex n({h, h});
    for (auto _ : state) benchmark::DoNotOptimize(solve_linear_fp(sys, n));
}
BENCHMARK(BM_LinearFP)->Arg(2)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_NonlinearFP(benchmark::State& state)
{
    const auto sys = reference_system();
    const int h = static_cast<int>(state.range(0));
    const MultiIndex n({h, h});
    for (auto _ : state) benchmark::DoNotOptimize(fixed_point_solve(sys, n));
}
BENCHMARK(BM_NonlinearFP)->Arg(2)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_LinearSignChanges(benchmark::State& state)
{
    const auto sys = reference_system();
    const auto a = solve_linear_fp(sys, MultiIndex({6, 6}));
    const auto route = static_cast<SignChangeRoute>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(remainder_sign_changes(a, sys, 0, route));
}
BENCHMARK(BM_LinearSignChanges)
    ->Arg(static_cast<int>(SignChangeRoute::integral))
    ->Arg(static_cast<int>(SignChangeRoute::series))
    ->Unit(benchmark::kMillisecond);
