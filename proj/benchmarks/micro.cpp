#include <benchmark/benchmark.h>

#include <random>

#include "rapidip/cpsearch.hpp"
#include "rapidip/lp.hpp"
#include "rapidip/mipsearch.hpp"
#include "rapidip/propagation.hpp"

using namespace rapidip;

namespace {

// Planted-feasible pure IP, bounds [0,3], coefficients in [-5,5].
Instance planted(int n, int m, std::uint64_t seed, bool zero_objective) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  InstanceBuilder b;
  std::vector<int> x(n);
  for (int j = 0; j < n; ++j) {
    b.add_variable(zero_objective ? 0 : pick(-5, 5), 0, 3, true);
    x[j] = pick(0, 3);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> t;
    double act = 0;
    for (int j = 0; j < n; ++j) {
      if (pick(0, 2) != 0) continue;
      const int a = pick(1, 5) * (pick(0, 1) ? 1 : -1);
      t.emplace_back(j, a);
      act += a * x[j];
    }
    if (!t.empty()) b.add_row(t, Sense::LessEqual, act + pick(0, 2));
  }
  return b.build();
}

void BM_SolveLp(benchmark::State& state) {
  const Instance inst = planted(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 2, 1, false);
  const BoundBox box(inst);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(inst, box));
}
BENCHMARK(BM_SolveLp)->Arg(10)->Arg(20)->Arg(40);

void BM_PropagateFixpoint(benchmark::State& state) {
  const Instance inst = planted(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 2, false);
  for (auto _ : state) {
    BoundBox box(inst);
    ConflictGraph g(inst.num_vars());
    benchmark::DoNotOptimize(propagate_to_fixpoint(inst, box, g));
  }
}
BENCHMARK(BM_PropagateFixpoint)->Arg(20)->Arg(80);

void BM_CpSearch(benchmark::State& state) {
  const Instance inst = planted(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 2, 3, true);
  CpConfig cfg;
  cfg.node_limit = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(cp_search(inst, BoundBox(inst), cfg));
}
BENCHMARK(BM_CpSearch)->Arg(12)->Arg(24);

void BM_Solve(benchmark::State& state) {
  const Instance inst = planted(16, 10, 4, false);
  SolveConfig cfg;
  cfg.rapid.mode = state.range(0) ? RapidMode::Local : RapidMode::Off;
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, cfg));
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
