#include <benchmark/benchmark.h>

#include "twistdh/twist.hpp"

using namespace twistdh;

static void BM_BuildRootSystem_E6(benchmark::State& state) {
  for (auto _ : state) {
    RootSystem rs = build_root_system(Series::E, 6);
    benchmark::DoNotOptimize(rs.roots.size());
  }
}
BENCHMARK(BM_BuildRootSystem_E6);

static void BM_MakeTwist_E6Flip(benchmark::State& state) {
  RootSystem rs = build_root_system(Series::E, 6);
  for (auto _ : state) {
    Twist tw = flip_twist(rs);
    benchmark::DoNotOptimize(tw.wk_indices.size());
  }
}
BENCHMARK(BM_MakeTwist_E6Flip);

BENCHMARK_MAIN();
