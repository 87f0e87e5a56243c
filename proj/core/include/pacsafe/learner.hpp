#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "pacsafe/monomial.hpp"
#include "pacsafe/random.hpp"
#include "pacsafe/sul.hpp"

namespace pacsafe {

enum class OracleSemantics {
  /// A monomial is accepted only if every expansion is safe.
  AllSafe,
  /// Accepts as soon as one expansion is safe. Unsound; kept for comparison.
  PaperLiteral,
};

inline constexpr std::uint64_t kDefaultOracleCap = 1'000'000;

struct LearnerConfig {
  std::size_t horizon = 1;
  /// L: examples drawn, including those skipped as already implied.
  std::size_t sample_budget = 1000;
  std::size_t max_sample_attempts = 100'000;
  std::uint64_t seed = 0;
  /// 1-based steps, tried in this order. Empty means ascending.
  std::vector<std::size_t> generalization_order;
  OracleSemantics semantics = OracleSemantics::AllSafe;
  /// Oracle calls whose expansion exceeds this many sequences keep the binding.
  std::uint64_t oracle_cap = kDefaultOracleCap;
  /// Receives one line per appended monomial and cap warnings.
  std::function<void(std::string_view)> log;

  void validate() const;
};

struct LearnerStats {
  std::uint64_t examples_drawn = 0;
  std::uint64_t examples_skipped_implied = 0;
  std::uint64_t monomials_added = 0;
  std::uint64_t sample_attempts = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t oracle_sequence_queries = 0;
  std::uint64_t oracle_cap_hits = 0;
  std::chrono::duration<double> wall_time{0};
};

struct LearnResult {
  MonomialSet g;
  LearnerStats stats;
};

/// Draws uniform sequences until one is safe and returns it fully bound.
/// Throws SamplingCapError after `max_attempts` unsafe draws.
Monomial get_example(SystemUnderLearning& sul, std::size_t n, Rng& rng, std::size_t max_attempts);

struct OracleAnswer {
  bool verdict = false;
  std::uint64_t queries = 0;
  bool cap_exceeded = false;

  explicit operator bool() const noexcept { return verdict; }
};

/// Membership check for a generalized path. Short-circuits on the first
/// expansion that decides the answer.
OracleAnswer oracle(SystemUnderLearning& sul, const Monomial& v, OracleSemantics semantics = OracleSemantics::AllSafe,
                    std::uint64_t cap = kDefaultOracleCap);

/// Learns the set of generalized safe paths from `cfg.sample_budget` safe
/// examples, generalizing each non-implied example one step at a time.
LearnResult learn_safe_set(SystemUnderLearning& sul, const LearnerConfig& cfg);

}  // namespace pacsafe
