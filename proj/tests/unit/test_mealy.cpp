#include <gtest/gtest.h>

#include <random>

#include "pacsafe/errors.hpp"
#include "pacsafe/mealy.hpp"
#include "pacsafe/models.hpp"
#include "support/brute_force.hpp"

using namespace pacsafe;

namespace {

std::vector<std::string> words(std::initializer_list<const char*> w) { return {w.begin(), w.end()}; }

StateId state(const MealyMachine& m, const char* name) { return m.states().at(name); }

const char* kAlksText = R"(inputs: l r s
outputs: ok alarm
initial: C
safe: C L R
# state, input -> state / output
C l -> L / ok
C r -> R / ok
C s -> C / ok
L l -> A / alarm
L r -> C / ok
L s -> L / ok
R l -> C / ok
R r -> A / alarm
R s -> R / ok
A l -> A / alarm
A r -> A / alarm
A s -> A / alarm
)";

}  // namespace

TEST(Trace, StraightAheadStaysCentred) {
  auto m = build_alks(false);
  auto r = trace(m, words({"s", "s", "s"}));
  EXPECT_EQ(r.final_state, state(m, "C"));
  EXPECT_TRUE(r.safe);
  EXPECT_EQ(r.outputs.size(), 3u);
}

TEST(Trace, TwoLeftsRaiseTheAlarm) {
  auto m = build_alks(false);
  auto r = trace(m, words({"l", "l"}));
  EXPECT_EQ(r.final_state, state(m, "A"));
  EXPECT_FALSE(r.safe);
  ASSERT_EQ(r.outputs.size(), 2u);
  EXPECT_EQ(m.outputs().name(r.outputs[0]), "ok");
  EXPECT_EQ(m.outputs().name(r.outputs[1]), "alarm");
}

TEST(Trace, SingleStepIsOneTransition) {
  auto m = build_coffee();
  for (SymbolId i = 0; i < m.inputs().size(); ++i) {
    InputSequence seq{i};
    EXPECT_EQ(trace(m, seq).final_state, m.transition(i, m.initial()));
  }
}

TEST(Trace, UnknownSymbolIsRejected) {
  auto m = build_alks(false);
  EXPECT_THROW(trace(m, words({"s", "x"})), ValidationError);
  InputSequence bad{0, 7};
  EXPECT_THROW(trace(m, bad), ValidationError);
}

TEST(Trace, AgreesWithHandWrittenTable) {
  for (bool assist : {false, true}) {
    auto m = build_alks(assist);
    auto ref = reference::ref_alks(assist);
    for (const auto& w : reference::all_words(3, 4)) {
      auto r = trace(m, InputSequence(w.begin(), w.end()));
      EXPECT_EQ(m.states().name(r.final_state), ref.run(reference::names_of(ref, w)));
    }
  }
}

TEST(Trace, DeterministicAndPrefixCompositional) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    RandomMachineParams p;
    p.states = 6;
    p.alphabet_size = 3;
    p.seed = rng();
    p.absorbing_unsafe = k % 2 == 0;
    auto m = random_machine(p);
    std::uniform_int_distribution<SymbolId> pick(0, 2);
    InputSequence a(1 + k % 5), b(1 + k % 3);
    for (auto& s : a) s = pick(rng);
    for (auto& s : b) s = pick(rng);
    InputSequence ab = a;
    ab.insert(ab.end(), b.begin(), b.end());

    EXPECT_EQ(trace(m, ab), trace(m, ab));
    auto mid = trace(m, a).final_state;
    EXPECT_EQ(trace(m, ab).final_state, trace_from(m, mid, b).final_state);
  }
}

TEST(ReachableSet, OneStepFromCentre) {
  auto m = build_alks(false);
  auto r = reachable_set(m, 1);
  std::vector<StateId> expected{state(m, "C"), state(m, "L"), state(m, "R")};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(r.states(), expected);
}

TEST(ReachableSet, TwoStepsReachAlarm) {
  auto m = build_alks(false);
  auto r = reachable_set(m, 2);
  EXPECT_EQ(r.states().size(), 4u);
  EXPECT_TRUE(r.contains(state(m, "A")));
}

TEST(ReachableSet, SelfLoopingInitialState) {
  auto m = none_safe_machine(3);
  EXPECT_EQ(reachable_set(m, 1).states(), std::vector<StateId>{m.initial()});
}

TEST(ReachableSet, WitnessesReTrace) {
  auto m = build_coffee();
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& [s, witness] : reachable_set(m, n).witnesses) {
      EXPECT_EQ(witness.size(), n);
      EXPECT_EQ(trace(m, witness).final_state, s);
    }
  }
}

TEST(ReachableSet, ErrorsOnZeroHorizonAndCap) {
  auto m = build_alks(false);
  EXPECT_THROW(reachable_set(m, 0), ValidationError);
  EXPECT_THROW(reachable_set(m, 12, 1000), ResourceError);
}

TEST(ParseModel, ReadsLaneKeepingModel) {
  auto m = parse_model(kAlksText);
  EXPECT_EQ(m.states().size(), 4u);
  EXPECT_EQ(m.inputs().size(), 3u);
  EXPECT_EQ(m.inputs().names(), words({"l", "r", "s"}));
  std::vector<StateId> safe{state(m, "C"), state(m, "L"), state(m, "R")};
  EXPECT_EQ(m.safe_states(), safe);
  EXPECT_EQ(m.states().name(m.initial()), "C");
}

TEST(ParseModel, BundledFileMatchesBuilder) {
  auto file = load_bundled_model("alks_without");
  auto built = build_alks(false);
  EXPECT_EQ(file.states().size(), 4u);
  for (const auto& w : reference::all_words(3, 4)) {
    InputSequence seq(w.begin(), w.end());
    EXPECT_EQ(trace(file, seq), trace(built, seq));
  }
}

TEST(ParseModel, MissingTransitionFailsTotality) {
  std::string text = kAlksText;
  text.erase(text.find("R s -> R / ok\n"), std::string("R s -> R / ok\n").size());
  try {
    parse_model(text);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'R' on input 's'"), std::string::npos) << e.what();
  }
}

TEST(ParseModel, InitialStateMustBeDeclared) {
  std::string text = "states: p q\ninputs: a\noutputs: o\ninitial: z\nsafe: p\np a -> q / o\nq a -> p / o\n";
  EXPECT_THROW(parse_model(text), ValidationError);
  std::string implicit = "inputs: a\noutputs: o\ninitial: z\nsafe: p\np a -> p / o\n";
  EXPECT_THROW(parse_model(implicit), ValidationError);
}

TEST(ParseModel, ReportsLineAndColumn) {
  std::string text = "inputs: a b\noutputs: o\ninitial: p\nsafe: p\np a -> p / o\np c -> p / o\n";
  try {
    parse_model(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6u);
    EXPECT_EQ(e.column(), 3u);
  }
  try {
    parse_model("inputs: a\noutputs: o\ninitial: p\nsafe: p\np a => p / o\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(ParseModel, RejectsDuplicatesAndUndeclaredSymbols) {
  const std::string head = "inputs: a\noutputs: o\ninitial: p\nsafe: p\n";
  EXPECT_THROW(parse_model(head + "p a -> p / o\np a -> p / o\n"), ParseError);
  EXPECT_THROW(parse_model(head + "p a -> p / x\n"), ParseError);
  EXPECT_THROW(parse_model(head + "p a -> q / o\n"), ParseError);
  EXPECT_THROW(parse_model("inputs: a a\noutputs: o\ninitial: p\nsafe: p\np a -> p / o\n"), ParseError);
  EXPECT_THROW(parse_model("inputs:\noutputs: o\ninitial: p\nsafe: p\n"), ParseError);
  EXPECT_THROW(parse_model("outputs: o\ninitial: p\nsafe: p\np a -> p / o\n"), ValidationError);
  EXPECT_THROW(parse_model(head + "inputs: b\np a -> p / o\n"), ParseError);
}

TEST(ParseModel, UnicodeSymbols) {
  auto m = load_bundled_model("coffee");
  EXPECT_EQ(m.outputs().names(), words({"✓", "☕", "✗"}));
  auto r = trace(m, words({"water", "pod", "water", "button"}));
  EXPECT_EQ(m.outputs().name(r.outputs.back()), "☕");
}

TEST(ParseModel, SerializeRoundTripPreservesBehaviour) {
  std::mt19937_64 rng(5);
  std::vector<MealyMachine> machines{build_alks(false), build_alks(true), build_coffee(), none_safe_machine(2)};
  for (int k = 0; k < 10; ++k) {
    machines.push_back(random_machine({.states = 5, .alphabet_size = 3, .unsafe_fraction = 0.4,
                                       .absorbing_unsafe = k % 2 == 0, .seed = rng()}));
  }
  for (const auto& m : machines) {
    auto again = parse_model(serialize_model(m));
    EXPECT_EQ(serialize_model(again), serialize_model(m));
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& w : reference::all_words(m.inputs().size(), n)) {
        InputSequence seq(w.begin(), w.end());
        EXPECT_EQ(trace(again, seq), trace(m, seq));
      }
    }
  }
}
