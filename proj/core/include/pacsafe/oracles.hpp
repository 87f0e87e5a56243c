#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "pacsafe/bigint.hpp"
#include "pacsafe/mealy.hpp"
#include "pacsafe/sul.hpp"

namespace pacsafe {

struct ExactCount {
  std::size_t n = 0;
  BigInt safe_paths = 0;
  BigInt total_paths = 0;
  double probability = 0.0;
};

/// Path counts per state over n steps; safe paths are those whose final
/// state is safe. O(n |S| |I|).
ExactCount exact_count_dp(const MealyMachine& machine, std::size_t n);

/// Counts paths that never visit an unsafe state (the initial state
/// included). Equals exact_count_dp when unsafe states are absorbing.
ExactCount exact_count_dp_never_unsafe(const MealyMachine& machine, std::size_t n);

/// Traces every sequence in I^n. Throws ResourceError when |I|^n > cap.
ExactCount exact_count_enumerate(const MealyMachine& machine, std::size_t n, std::uint64_t cap = kDefaultEnumerationCap);

struct MonteCarloEstimate {
  std::uint64_t samples = 0;
  std::uint64_t safe_hits = 0;
  double estimate = 0.0;
  /// sqrt(p (1 - p) / samples)
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

MonteCarloEstimate monte_carlo(SystemUnderLearning& sul, std::size_t n, std::uint64_t samples, std::uint64_t seed);

using SulFactory = std::function<std::unique_ptr<SystemUnderLearning>()>;

/// Splits the budget across `shards` workers, each with its own adapter and
/// a sub-seed derived from `seed`. Deterministic for fixed seed and shards.
MonteCarloEstimate monte_carlo_sharded(const SulFactory& factory, std::size_t n, std::uint64_t samples,
                                       std::uint64_t seed, unsigned shards);

}  // namespace pacsafe
