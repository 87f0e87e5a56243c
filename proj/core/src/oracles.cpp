#include "pacsafe/oracles.hpp"

#include <cmath>
#include <future>

#include "pacsafe/errors.hpp"

namespace pacsafe {

namespace {

ExactCount finish(std::size_t n, BigInt safe, std::size_t alphabet_size) {
  ExactCount c;
  c.n = n;
  c.total_paths = ipow(alphabet_size, n);
  c.safe_paths = std::move(safe);
  c.probability = ratio_to_double(c.safe_paths, c.total_paths);
  return c;
}

ExactCount count_dp(const MealyMachine& machine, std::size_t n, bool prune_unsafe) {
  const std::size_t states = machine.states().size();
  const std::size_t inputs = machine.inputs().size();
  std::vector<BigInt> counts(states, 0);
  counts[machine.initial()] = 1;
  if (prune_unsafe && !machine.is_safe_state(machine.initial())) counts[machine.initial()] = 0;

  std::vector<BigInt> next(states);
  for (std::size_t step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), BigInt(0));
    for (StateId s = 0; s < states; ++s) {
      if (counts[s] == 0) continue;
      for (SymbolId i = 0; i < inputs; ++i) next[machine.transition(i, s)] += counts[s];
    }
    if (prune_unsafe) {
      for (StateId s = 0; s < states; ++s) {
        if (!machine.is_safe_state(s)) next[s] = 0;
      }
    }
    counts.swap(next);
  }

  BigInt safe = 0;
  for (StateId s = 0; s < states; ++s) {
    if (machine.is_safe_state(s)) safe += counts[s];
  }
  return finish(n, std::move(safe), inputs);
}

MonteCarloEstimate summarize(std::uint64_t samples, std::uint64_t hits, std::uint64_t seed) {
  MonteCarloEstimate e;
  e.samples = samples;
  e.safe_hits = hits;
  e.seed = seed;
  e.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(samples));
  return e;
}

}  // namespace

ExactCount exact_count_dp(const MealyMachine& machine, std::size_t n) { return count_dp(machine, n, false); }

ExactCount exact_count_dp_never_unsafe(const MealyMachine& machine, std::size_t n) {
  return count_dp(machine, n, true);
}

ExactCount exact_count_enumerate(const MealyMachine& machine, std::size_t n, std::uint64_t cap) {
  std::uint64_t safe = 0;
  for_each_sequence(machine.inputs().size(), n, cap, [&](std::span<const SymbolId> seq) {
    if (machine.is_safe_state(machine.run(machine.initial(), seq))) ++safe;
  });
  return finish(n, BigInt(safe), machine.inputs().size());
}

MonteCarloEstimate monte_carlo(SystemUnderLearning& sul, std::size_t n, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("Monte Carlo needs at least one sample");
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    if (sul.is_safe(random_input(sul, n, rng))) ++hits;
  }
  return summarize(samples, hits, seed);
}

MonteCarloEstimate monte_carlo_sharded(const SulFactory& factory, std::size_t n, std::uint64_t samples,
                                       std::uint64_t seed, unsigned shards) {
  if (samples < 1) throw ValidationError("Monte Carlo needs at least one sample");
  if (shards == 0) throw ValidationError("shard count must be positive");
  std::vector<std::future<std::uint64_t>> parts;
  for (unsigned k = 0; k < shards; ++k) {
    std::uint64_t share = samples / shards + (k < samples % shards ? 1 : 0);
    if (share == 0) continue;
    std::uint64_t sub_seed = derive_seed(seed, "monte-carlo-shard/" + std::to_string(k));
    parts.push_back(std::async(std::launch::async, [&factory, n, share, sub_seed] {
      auto sul = factory();
      return monte_carlo(*sul, n, share, sub_seed).safe_hits;
    }));
  }
  std::uint64_t hits = 0;
  for (auto& p : parts) hits += p.get();
  return summarize(samples, hits, seed);
}

}  // namespace pacsafe
