#include <benchmark/benchmark.h>

#include "pacsafe/bounds.hpp"
#include "pacsafe/learner.hpp"
#include "pacsafe/models.hpp"
#include "pacsafe/oracles.hpp"

using namespace pacsafe;

namespace {

void BM_LearnAlks(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto m = build_alks(false);
  std::uint64_t queries = 0;
  for (auto _ : state) {
    MachineSul sul(m);
    LearnerConfig cfg;
    cfg.horizon = n;
    cfg.sample_budget = 1000;
    cfg.seed = 42;
    benchmark::DoNotOptimize(learn_safe_set(sul, cfg));
    queries = sul.query_count();
  }
  state.counters["queries"] = static_cast<double>(queries);
}
BENCHMARK(BM_LearnAlks)->Arg(3)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  MachineSul sul(build_alks(true));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(sul, 10, 1000, ++seed));
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMicrosecond);

void BM_SolveH(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_h(1000, 207));
}
BENCHMARK(BM_SolveH);

}  // namespace
