#include <benchmark/benchmark.h>

#include <random>

#include "dsim/transport.h"

namespace dsim {
namespace {

TransportProblem RandomProblem(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  TransportProblem p{std::vector<double>(m), std::vector<double>(n), Matrix(m, n)};
  double s = 0, d = 0;
  for (auto& x : p.supply) s += (x = unit(rng));
  for (auto& x : p.demand) d += (x = unit(rng));
  for (auto& x : p.supply) x /= s;
  for (auto& x : p.demand) x /= d;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.cost(i, j) = 10.0 * unit(rng);
  }
  return p;
}

void BM_SolveTransportSquare(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const TransportProblem p = RandomProblem(size, size, 1);
  std::size_t pivots = 0;
  for (auto _ : state) {
    TransportPlan plan = SolveTransport(p);
    pivots = plan.pivots;
    benchmark::DoNotOptimize(plan.objective);
  }
  state.counters["pivots"] = static_cast<double>(pivots);
}
BENCHMARK(BM_SolveTransportSquare)->RangeMultiplier(4)->Range(16, 1024)
    ->Unit(benchmark::kMillisecond);

// Combined-corpus scale: thousands of source categories against a few
// hundred target categories.
void BM_SolveTransportWide(benchmark::State& state) {
  const TransportProblem p =
      RandomProblem(static_cast<std::size_t>(state.range(0)),
                    static_cast<std::size_t>(state.range(1)), 2);
  for (auto _ : state) {
    TransportPlan plan = SolveTransport(p);
    benchmark::DoNotOptimize(plan.objective);
    state.counters["pivots"] = static_cast<double>(plan.pivots);
  }
}
BENCHMARK(BM_SolveTransportWide)->Args({1000, 200})->Args({6089, 555})
    ->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
}  // namespace dsim
