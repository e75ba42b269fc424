#include <benchmark/benchmark.h>

#include "qcholder/beltrami.hpp"
#include "qcholder/verify.hpp"

using namespace qcholder;

namespace {

void BM_Beurling(benchmark::State& state) {
  const GridSpec g(static_cast<std::size_t>(state.range(0)), 4.0);
  const auto h = random_beltrami(1, 0.5, 6, g);
  SpectralOperators ops(g);
  GridField out(g);
  for (auto _ : state) {
    ops.beurling(h.samples().values(), out.values());
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_Beurling)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_PrincipalSolution(benchmark::State& state) {
  const GridSpec g(static_cast<std::size_t>(state.range(0)), 4.0);
  const auto mu = random_beltrami(7, 1.0 / 3.0, 6, g);
  BeltramiSolver solver(g);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(mu).iterations);
}
BENCHMARK(BM_PrincipalSolution)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_HolderSearch(benchmark::State& state) {
  const auto f = maps::extremal({2.0, 100.0});
  verify::SearchBudget budget;
  budget.radii = static_cast<int>(state.range(0));
  budget.angles = 2 * budget.radii;
  for (auto _ : state) benchmark::DoNotOptimize(verify::estimate_holder_constant(f, 2.0, budget).constant_estimate);
}
BENCHMARK(BM_HolderSearch)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ExtremalMap(benchmark::State& state) {
  const geometry::ExtremalParams p(2.0, 100.0);
  Complex z{0.3, 0.2};
  for (auto _ : state) {
    z = geometry::extremal_disk_map(z, p) * 0.999 + Complex(0.0001, 0.0);
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_ExtremalMap);

}  // namespace

BENCHMARK_MAIN();
