#include <vector>

#include <benchmark/benchmark.h>

#include <fpade/measures.hpp>
#include <fpade/orthopoly.hpp>

using namespace fpade;

static void BM_RecurrenceTabulated(benchmark::State& state)
{
    const auto spec = MeasureSpec(Interval(-1, 1), TabulatedDensity{{1.0, 2.0, 0.5, 1.5, 1.0}});
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(recurrence_coefficients(spec, n));
}
BENCHMARK(BM_RecurrenceTabulated)->Arg(10)->Arg(40)->Arg(100);

static void BM_LanczosVaryingWeight(benchmark::State& state)
{
    const int deg = static_cast<int>(state.range(0));
    const Quadrature& q = gauss_quadrature(MeasureSpec::lebesgue(2, 3), 4 * deg + 20);
    std::vector<double> w(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) w[i] = 1.0 / ((q.nodes[i] + 1.5) * (q.nodes[i] + 0.5));
    for (auto _ : state) benchmark::DoNotOptimize(varying_orthogonal_zeros(q, w, deg));
}
BENCHMARK(BM_LanczosVaryingWeight)->Arg(5)->Arg(25)->Arg(50);

static void BM_SecondKind(benchmark::State& state)
{
    const auto s0 = MeasureSpec::chebyshev(-1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(second_kind_functions(s0, 2.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SecondKind)->Arg(20)->Arg(100);
