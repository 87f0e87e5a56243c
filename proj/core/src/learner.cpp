#include "pacsafe/learner.hpp"

#include <algorithm>
#include <numeric>

#include "pacsafe/errors.hpp"

namespace pacsafe {

void LearnerConfig::validate() const {
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  if (sample_budget < 1) throw ValidationError("sample budget L must be at least 1");
  if (max_sample_attempts < 1) throw ValidationError("max_sample_attempts must be at least 1");
  if (!generalization_order.empty()) {
    std::vector<std::size_t> sorted = generalization_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expected(horizon);
    std::iota(expected.begin(), expected.end(), 1);
    if (sorted != expected) throw ValidationError("generalization order must be a permutation of 1..n");
  }
}

Monomial get_example(SystemUnderLearning& sul, std::size_t n, Rng& rng, std::size_t max_attempts) {
  if (max_attempts < 1) throw ValidationError("sampling cap must be at least 1");
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    InputSequence seq = random_input(sul, n, rng);
    if (sul.is_safe(seq)) return Monomial::from_sequence(seq);
  }
  throw SamplingCapError(max_attempts);
}

OracleAnswer oracle(SystemUnderLearning& sul, const Monomial& v, OracleSemantics semantics, std::uint64_t cap) {
  OracleAnswer answer;
  const Expansion expansion = expand(v, sul.input_alphabet().size());
  if (expansion.size() > cap) {
    answer.cap_exceeded = true;
    return answer;
  }
  const bool all_safe = semantics == OracleSemantics::AllSafe;
  for (const InputSequence& seq : expansion) {
    ++answer.queries;
    const bool safe = sul.is_safe(seq);
    if (all_safe && !safe) return answer;
    if (!all_safe && safe) {
      answer.verdict = true;
      return answer;
    }
  }
  answer.verdict = all_safe;
  return answer;
}

LearnResult learn_safe_set(SystemUnderLearning& sul, const LearnerConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = cfg.horizon;

  std::vector<std::size_t> order = cfg.generalization_order;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 1);
  }

  LearnResult result{MonomialSet(n), {}};
  LearnerStats& stats = result.stats;
  Rng rng(cfg.seed);

  for (std::size_t k = 0; k < cfg.sample_budget; ++k) {
    const std::uint64_t before = sul.query_count();
    Monomial v = get_example(sul, n, rng, cfg.max_sample_attempts);
    stats.sample_attempts += sul.query_count() - before;
    ++stats.examples_drawn;

    if (implied_by_set(v, result.g)) {
      ++stats.examples_skipped_implied;
      continue;
    }

    std::uint64_t calls_here = 0;
    for (std::size_t step : order) {
      if (!v.is_bound(step)) continue;
      Monomial candidate = v.without(step);
      OracleAnswer answer = oracle(sul, candidate, cfg.semantics, cfg.oracle_cap);
      ++stats.oracle_calls;
      ++calls_here;
      stats.oracle_sequence_queries += answer.queries;
      if (answer.cap_exceeded) {
        ++stats.oracle_cap_hits;
        if (cfg.log) cfg.log("warning: oracle expansion cap exceeded at step " + std::to_string(step) + "; keeping binding");
        continue;
      }
      if (answer.verdict) v = std::move(candidate);
    }

    if (cfg.log) cfg.log(v.to_string(sul.input_alphabet()) + " oracle_calls=" + std::to_string(calls_here));
    if (result.g.insert(std::move(v))) ++stats.monomials_added;
  }

  stats.wall_time = std::chrono::steady_clock::now() - started;
  return result;
}

}  // namespace pacsafe
