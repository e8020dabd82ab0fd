#include <benchmark/benchmark.h>

#include <vector>

#include "mvlabel/random.hpp"
#include "mvlabel/stats.hpp"

namespace {

std::vector<std::vector<double>> groups(std::size_t count, std::size_t size, std::uint64_t seed) {
  mvlabel::SplitMix64 rng(seed);
  std::vector<std::vector<double>> g(count);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < size; ++j) g[i].push_back(rng.normal() + 0.2 * static_cast<double>(i));
  return g;
}

void BM_ShapiroWilk(benchmark::State& state) {
  const auto g = groups(1, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::shapiro_wilk(g[0]));
}
BENCHMARK(BM_ShapiroWilk)->Arg(50)->Arg(560)->Arg(5000);

void BM_MannWhitneyExact(benchmark::State& state) {
  const auto g = groups(2, 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::mann_whitney_u(g[0], g[1]));
}
BENCHMARK(BM_MannWhitneyExact);

void BM_MannWhitneyNormal(benchmark::State& state) {
  const auto g = groups(2, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::mann_whitney_u(g[0], g[1]));
}
BENCHMARK(BM_MannWhitneyNormal)->Arg(280);

void BM_WelchT(benchmark::State& state) {
  const auto g = groups(2, 280, 4);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::welch_t_test(g[0], g[1]));
}
BENCHMARK(BM_WelchT);

void BM_KruskalWallis(benchmark::State& state) {
  const auto g = groups(5, 112, 5);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::kruskal_wallis(g));
}
BENCHMARK(BM_KruskalWallis);

void BM_Anova(benchmark::State& state) {
  const auto g = groups(5, 112, 6);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::one_way_anova(g));
}
BENCHMARK(BM_Anova);

void BM_DispatchTest(benchmark::State& state) {
  const auto g = groups(4, 140, 7);
  for (auto _ : state) benchmark::DoNotOptimize(mvlabel::dispatch_test(g));
}
BENCHMARK(BM_DispatchTest);

}  // namespace
