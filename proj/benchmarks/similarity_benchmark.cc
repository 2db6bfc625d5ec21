#include <benchmark/benchmark.h>

#include <random>

#include "dsim/selection.h"
#include "dsim/similarity.h"

namespace dsim {
namespace {

Domain SyntheticDomain(std::size_t categories, std::size_t dim,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> feature(0.0, 1.0);
  std::uniform_int_distribution<std::uint64_t> count(1, 1000);
  std::vector<CategoryCentroid> cs(categories);
  for (std::size_t i = 0; i < categories; ++i) {
    cs[i].category_id = "c" + std::to_string(i);
    cs[i].count = count(rng);
    cs[i].mean.resize(dim);
    for (auto& v : cs[i].mean) v = feature(rng);
  }
  return Domain::FromCentroids(std::move(cs));
}

void BM_CostMatrix(benchmark::State& state) {
  const Domain source = SyntheticDomain(static_cast<std::size_t>(state.range(0)), 2048, 1);
  const Domain target = SyntheticDomain(200, 2048, 2);
  for (auto _ : state) {
    Matrix cost = CostMatrix(source, target);
    benchmark::DoNotOptimize(cost);
  }
}
BENCHMARK(BM_CostMatrix)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SelectTopK(benchmark::State& state) {
  const Domain source = SyntheticDomain(6089, 256, 3);
  const Domain target = SyntheticDomain(static_cast<std::size_t>(state.range(0)), 256, 4);
  for (auto _ : state) {
    SelectionReport report = SelectTopK(source, target, 200);
    benchmark::DoNotOptimize(report.selected.data());
  }
}
BENCHMARK(BM_SelectTopK)->Arg(100)->Arg(555)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dsim
