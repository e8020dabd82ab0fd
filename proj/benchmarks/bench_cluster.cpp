#include <benchmark/benchmark.h>

#include "mvlabel/cluster_engine.hpp"
#include "mvlabel/random.hpp"

namespace {

mvlabel::Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  mvlabel::SplitMix64 rng(seed);
  mvlabel::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.normal() + 4.0 * static_cast<double>(r % 4);
  return m;
}

void BM_KMeansFit(benchmark::State& state) {
  const auto m = gaussian(static_cast<std::size_t>(state.range(0)), 11, 1);
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::kmeans_fit(m, k, {7, 300, 1e-4}));
}
BENCHMARK(BM_KMeansFit)->Args({560, 4})->Args({560, 15})->Args({5000, 4});

void BM_Silhouette(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = gaussian(n, 11, 2);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 4);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::silhouette_score(m, labels));
}
BENCHMARK(BM_Silhouette)->Arg(560)->Arg(2000);

void BM_SelectK(benchmark::State& state) {
  const auto m = gaussian(560, 11, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::select_k(m, {2, 15}, {7, 300, 1e-4}));
}
BENCHMARK(BM_SelectK)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
