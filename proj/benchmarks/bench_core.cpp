#include <random>

#include <benchmark/benchmark.h>

#include "heatlab/fock.hpp"
#include "heatlab/operators.hpp"
#include "heatlab/stochastic.hpp"
#include "heatlab/transforms.hpp"

using namespace heatlab;

static void BM_HeatKernelSU2(benchmark::State& state) {
  const HeatKernel h(CompactGroup::su2(), 0.1 * state.range(0));
  std::mt19937_64 rng(1);
  const GroupPoint x = haar_random(CompactGroup::su2(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(h(x));
}
BENCHMARK(BM_HeatKernelSU2)->Arg(1)->Arg(5)->Arg(10);

static void BM_SegalBargmannTorus(benchmark::State& state) {
  const CompactGroup G = CompactGroup::torus(2);
  std::mt19937_64 rng(2);
  const auto f = random_band_limited(G, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(norm_in_bargmann_torus(segal_bargmann(f, 0.5)));
}
BENCHMARK(BM_SegalBargmannTorus);

static void BM_TaylorMap(benchmark::State& state) {
  const CompactGroup G = CompactGroup::su2();
  std::mt19937_64 rng(3);
  const auto f = random_band_limited(G, 2, rng);
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(taylor_map(f, 0.5, N));
}
BENCHMARK(BM_TaylorMap)->Arg(4)->Arg(6)->Arg(8);

static void BM_FockSpace(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(FockSpace(CompactGroup::su2(), 0.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FockSpace)->Arg(2)->Arg(4);

static void BM_Holonomies(benchmark::State& state) {
  const CompactGroup G = CompactGroup::su2();
  for (auto _ : state) benchmark::DoNotOptimize(sample_holonomies(G, 0.5, 1000, 1000, 7, {1}));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Holonomies)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
