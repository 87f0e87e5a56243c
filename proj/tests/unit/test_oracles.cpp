#include <gtest/gtest.h>

#include <cmath>

#include "pacsafe/errors.hpp"
#include "pacsafe/models.hpp"
#include "pacsafe/oracles.hpp"
#include "support/brute_force.hpp"

using namespace pacsafe;

TEST(ExactDp, LaneKeepingCounts) {
  auto without = build_alks(false);
  auto with = build_alks(true);
  EXPECT_EQ(exact_count_dp(without, 3).safe_paths, 17);
  EXPECT_EQ(exact_count_dp(without, 3).total_paths, 27);
  EXPECT_EQ(exact_count_dp(without, 4).safe_paths, 41);
  EXPECT_EQ(exact_count_dp(without, 5).safe_paths, 99);
  EXPECT_EQ(exact_count_dp(with, 3).safe_paths, 23);
  EXPECT_EQ(exact_count_dp(with, 4).safe_paths, 71);
  EXPECT_EQ(exact_count_dp(with, 5).safe_paths, 207);
  EXPECT_NEAR(exact_count_dp(with, 3).probability, 0.852, 5e-4);
  EXPECT_EQ(exact_count_dp(without, 1).safe_paths, 3);
  EXPECT_EQ(exact_count_dp(with, 1).safe_paths, 3);
}

TEST(ExactDp, LongHorizonAgreesWithHandIteratedRecurrence) {
  // Counts of paths ending in C, L, R, A for the absorbing variant.
  std::uint64_t c = 1, l = 0, r = 0, a = 0;
  for (int step = 0; step < 10; ++step) {
    std::uint64_t nc = c + l + r, nl = c + l, nr = c + r, na = 3 * a + l + r;
    c = nc, l = nl, r = nr, a = na;
  }
  EXPECT_EQ(c + l + r, 8119u);
  auto e = exact_count_dp(build_alks(false), 10);
  EXPECT_EQ(e.safe_paths, 8119);
  EXPECT_EQ(e.total_paths, 59049);
  EXPECT_NEAR(e.probability, 8119.0 / 59049.0, 1e-15);
  EXPECT_NEAR(e.probability, 0.1375, 5e-5);
}

TEST(ExactDp, TrivialMachines) {
  for (std::size_t n : {1u, 4u, 12u}) {
    auto all = exact_count_dp(all_safe_machine(3), n);
    EXPECT_EQ(all.safe_paths, all.total_paths);
    EXPECT_EQ(all.probability, 1.0);
    EXPECT_EQ(exact_count_dp(none_safe_machine(3), n).safe_paths, 0);
  }
}

TEST(ExactDp, AgreesWithEnumerationOnRandomMachines) {
  std::mt19937_64 rng(101);
  int checked = 0;
  while (checked < 50) {
    RandomMachineParams p;
    p.states = 2 + rng() % 7;
    p.alphabet_size = 1 + rng() % 4;
    p.unsafe_fraction = 0.5;
    p.absorbing_unsafe = rng() % 2 == 0;
    p.seed = rng();
    auto m = random_machine(p);
    std::size_t n = 1 + rng() % 8;
    if (std::pow(static_cast<double>(p.alphabet_size), static_cast<double>(n)) > 1e4) continue;
    auto dp = exact_count_dp(m, n);
    EXPECT_EQ(dp.safe_paths, exact_count_enumerate(m, n).safe_paths);
    std::uint64_t ref = 0;
    for (const auto& w : reference::all_words(p.alphabet_size, n)) ref += reference::ref_machine_safe(m, w) ? 1 : 0;
    EXPECT_EQ(dp.safe_paths, ref);
    ++checked;
  }
}

TEST(ExactDp, ShippedModelsAgreeWithEnumeration) {
  for (const auto& name : bundled_model_names()) {
    auto m = load_bundled_model(name);
    const double k = static_cast<double>(m.inputs().size());
    for (std::size_t n = 1; std::pow(k, static_cast<double>(n)) <= 1e6 && n <= 20; ++n) {
      EXPECT_EQ(exact_count_dp(m, n).safe_paths, exact_count_enumerate(m, n, 1'000'000).safe_paths)
          << name << " n=" << n;
    }
  }
}

TEST(ExactDp, MassConservation) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    auto m = random_machine({.states = 6, .alphabet_size = 3, .unsafe_fraction = 0.5,
                             .absorbing_unsafe = false, .seed = rng()});
    auto safe = exact_count_dp(m, 15);
    // Flip the labels: unsafe paths under one labelling are safe under the other.
    std::vector<MealyMachine::Edge> edges;
    for (StateId s = 0; s < m.states().size(); ++s) {
      for (SymbolId i = 0; i < m.inputs().size(); ++i) edges.push_back(m.edge(s, i));
    }
    std::vector<bool> flipped(m.states().size());
    for (StateId s = 0; s < flipped.size(); ++s) flipped[s] = !m.is_safe_state(s);
    MealyMachine complement(m.states(), m.inputs(), m.outputs(), edges, m.initial(), flipped);
    EXPECT_EQ(safe.safe_paths + exact_count_dp(complement, 15).safe_paths, ipow(3, 15));
  }
}

TEST(ExactEnumerate, CapIsEnforced) {
  EXPECT_THROW(exact_count_enumerate(build_alks(false), 10, 1000), ResourceError);
}

TEST(NeverUnsafe, CoincidesWhenUnsafeIsAbsorbing) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    auto m = random_machine({.states = 6, .alphabet_size = 3, .absorbing_unsafe = true, .seed = rng()});
    for (std::size_t n = 1; n <= 8; ++n) {
      EXPECT_EQ(exact_count_dp(m, n).safe_paths, exact_count_dp_never_unsafe(m, n).safe_paths);
    }
  }
  EXPECT_EQ(exact_count_dp_never_unsafe(build_alks(false), 5).safe_paths, 99);
}

TEST(NeverUnsafe, ExcludesRecoveredPaths) {
  auto m = build_alks(true);
  // 23 paths end safe at n=3; the 4 that recover from A are not path-safe.
  EXPECT_EQ(exact_count_dp_never_unsafe(m, 3).safe_paths, 17);
  std::uint64_t ref = 0;
  for (const auto& w : reference::all_words(3, 5)) {
    StateId s = m.initial();
    bool ok = true;
    for (auto i : w) {
      s = m.edge(s, i).target;
      ok = ok && m.is_safe_state(s);
    }
    ref += ok ? 1 : 0;
  }
  EXPECT_EQ(exact_count_dp_never_unsafe(m, 5).safe_paths, ref);
}

TEST(MonteCarlo, Examples) {
  MachineSul without(build_alks(false));
  auto e = monte_carlo(without, 3, 1000, 11);
  EXPECT_LE(std::abs(e.estimate - 17.0 / 27.0), 3 * e.std_error);
  EXPECT_EQ(e.samples, 1000u);
  EXPECT_EQ(without.query_count(), 1000u);

  auto with_machine = build_alks(true);
  MachineSul with(with_machine);
  auto f = monte_carlo(with, 10, 1000, 12);
  EXPECT_LE(std::abs(f.estimate - exact_count_dp(with_machine, 10).probability), 3 * f.std_error);

  MachineSul all(all_safe_machine(4));
  auto g = monte_carlo(all, 6, 500, 1);
  EXPECT_EQ(g.estimate, 1.0);
  EXPECT_EQ(g.std_error, 0.0);
}

TEST(MonteCarlo, CoverageOverSeededRepetitions) {
  const double truth = 17.0 / 27.0;
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    MachineSul sul(build_alks(false));
    auto e = monte_carlo(sul, 3, 1000, derive_seed(1, "coverage/" + std::to_string(seed)));
    if (std::abs(e.estimate - truth) <= 3 * e.std_error) ++inside;
  }
  EXPECT_GE(inside, 99);
}

TEST(MonteCarlo, ShardedIsDeterministicAndUnbiased) {
  auto machine = build_alks(true);
  SulFactory factory = [&] { return std::make_unique<MachineSul>(machine); };
  auto a = monte_carlo_sharded(factory, 6, 20'001, 5, 4);
  auto b = monte_carlo_sharded(factory, 6, 20'001, 5, 4);
  EXPECT_EQ(a.safe_hits, b.safe_hits);
  EXPECT_EQ(a.samples, 20'001u);
  EXPECT_LE(std::abs(a.estimate - exact_count_dp(machine, 6).probability), 4 * a.std_error);
  EXPECT_THROW(monte_carlo_sharded(factory, 6, 10, 5, 0), ValidationError);
}

TEST(MonteCarlo, RejectsEmptyBudget) {
  MachineSul sul(build_alks(false));
  EXPECT_THROW(monte_carlo(sul, 3, 0, 1), ValidationError);
}
