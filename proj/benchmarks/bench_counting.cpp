#include <benchmark/benchmark.h>

#include <random>

#include "pacsafe/models.hpp"
#include "pacsafe/monomial.hpp"
#include "pacsafe/oracles.hpp"

using namespace pacsafe;

namespace {

MonomialSet random_set(std::size_t n, std::size_t alphabet, std::size_t members, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MonomialSet g(n);
  while (g.size() < members) {
    Monomial m(n);
    for (std::size_t step = 1; step <= n; ++step) {
      if (rng() % 3 != 0) m.bind(step, static_cast<SymbolId>(rng() % alphabet));
    }
    g.insert(std::move(m));
  }
  return g;
}

void BM_CountFormula(benchmark::State& state) {
  auto g = random_set(10, 3, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_formula(g, 3));
}
BENCHMARK(BM_CountFormula)->Arg(100)->Arg(1000);

void BM_CountExact(benchmark::State& state) {
  auto g = random_set(10, 3, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_exact(g, 3));
}
BENCHMARK(BM_CountExact)->Arg(100)->Arg(1000);

void BM_ExactDp(benchmark::State& state) {
  auto m = build_alks(true);
  for (auto _ : state) benchmark::DoNotOptimize(exact_count_dp(m, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ExactDp)->Arg(10)->Arg(100)->Arg(1000);

void BM_ExactEnumerate(benchmark::State& state) {
  auto m = build_alks(true);
  for (auto _ : state) benchmark::DoNotOptimize(exact_count_enumerate(m, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ExactEnumerate)->Arg(6)->Arg(10);

}  // namespace
