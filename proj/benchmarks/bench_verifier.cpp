#include <benchmark/benchmark.h>

#include "bvpcert/linear_verifier.hpp"

using namespace bvpcert;

namespace {

// Green's-operator contraction bound, turning point eps = 1e-4.
void BM_contraction(benchmark::State &state)
{
    const auto N = static_cast<std::size_t>(state.range(0));
    const auto p = turning_point(1e-4);
    const Mesh mesh = Mesh::uniform(N);
    const auto sol = solve_linear_bvp(p, mesh);
    const auto green = build_green_nodes<Interval>(p, mesh, sol.fundamentals, 15);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bound_I_minus_FH<Interval>(p, mesh, green, WeightMatrix::identity(2)));
    }
    state.SetComplexityN(state.range(0));
}

void BM_contraction_fast(benchmark::State &state)
{
    const auto N = static_cast<std::size_t>(state.range(0));
    const auto p = turning_point(1e-4);
    const Mesh mesh = Mesh::uniform(N);
    const auto sol = solve_linear_bvp(p, mesh);
    const auto green = build_green_nodes<FastInterval>(p, mesh, sol.fundamentals, 15);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bound_I_minus_FH<FastInterval>(p, mesh, green, WeightMatrix::identity(2)));
    }
    state.SetComplexityN(state.range(0));
}

void BM_solve(benchmark::State &state)
{
    const auto p = turning_point(1e-4);
    const Mesh mesh = Mesh::uniform(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_linear_bvp(p, mesh));
    }
    state.SetComplexityN(state.range(0));
}

} // namespace

BENCHMARK(BM_contraction)->RangeMultiplier(2)->Range(100, 1600)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_contraction_fast)->RangeMultiplier(2)->Range(100, 1600)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_solve)->RangeMultiplier(2)->Range(100, 1600)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK_MAIN();
