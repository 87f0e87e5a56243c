#include "pacsafe/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "pacsafe/errors.hpp"
#include "pacsafe/random.hpp"

#ifndef PACSAFE_INSTALL_MODEL_DIR
#define PACSAFE_INSTALL_MODEL_DIR ""
#endif
#ifndef PACSAFE_SOURCE_MODEL_DIR
#define PACSAFE_SOURCE_MODEL_DIR ""
#endif

namespace pacsafe {

MealyMachine build_alks(bool with_assist) {
  MachineBuilder b({"C", "L", "R", "A"}, {"l", "r", "s"}, {"ok", "alarm"});
  b.initial("C").safe({"C", "L", "R"});
  b.edge("C", "l", "L", "ok").edge("C", "r", "R", "ok").edge("C", "s", "C", "ok");
  b.edge("L", "l", "A", "alarm").edge("L", "r", "C", "ok").edge("L", "s", "L", "ok");
  b.edge("R", "l", "C", "ok").edge("R", "r", "A", "alarm").edge("R", "s", "R", "ok");
  for (const char* input : {"l", "r", "s"}) {
    if (with_assist) {
      b.edge("A", input, "C", "ok");
    } else {
      b.edge("A", input, "A", "alarm");
    }
  }
  return b.build();
}

MealyMachine build_coffee() {
  const char* ok = "✓";
  const char* cup = "☕";
  const char* err = "✗";
  MachineBuilder b({"a", "b", "c", "d", "e", "f"}, {"clean", "button", "water", "pod"}, {ok, cup, err});
  b.initial("a").safe({"a", "b", "c", "d", "e"});
  for (const char* s : {"a", "b", "c", "d", "e"}) b.edge(s, "clean", "a", ok);
  for (const char* s : {"a", "b", "c", "d"}) b.edge(s, "button", "f", err);
  b.edge("a", "water", "b", ok).edge("a", "pod", "c", ok);
  b.edge("b", "water", "b", ok).edge("b", "pod", "d", ok);
  b.edge("c", "water", "d", ok).edge("c", "pod", "c", ok);
  b.edge("d", "water", "e", ok).edge("d", "pod", "d", ok);
  b.edge("e", "button", "a", cup).edge("e", "water", "e", ok).edge("e", "pod", "e", ok);
  for (const char* i : {"clean", "button", "water", "pod"}) b.edge("f", i, "f", err);
  return b.build();
}

namespace {

std::vector<std::string> numbered(const char* prefix, std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < count; ++k) names.push_back(prefix + std::to_string(k));
  return names;
}

}  // namespace

MealyMachine all_safe_machine(std::size_t alphabet_size) {
  if (alphabet_size < 1) throw ValidationError("alphabet must be non-empty");
  auto inputs = numbered("i", alphabet_size);
  MachineBuilder b({"p", "q"}, inputs, {"ok"});
  b.initial("p").safe({"p", "q"});
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    b.edge("p", inputs[k], k % 2 == 0 ? "q" : "p", "ok");
    b.edge("q", inputs[k], "p", "ok");
  }
  return b.build();
}

MealyMachine none_safe_machine(std::size_t alphabet_size) {
  if (alphabet_size < 1) throw ValidationError("alphabet must be non-empty");
  auto inputs = numbered("i", alphabet_size);
  MachineBuilder b({"x"}, inputs, {"bad"});
  b.initial("x").safe({});
  for (const auto& i : inputs) b.edge("x", i, "x", "bad");
  return b.build();
}

MealyMachine random_machine(const RandomMachineParams& params) {
  if (params.states < 1) throw ValidationError("random machine needs at least one state");
  if (params.alphabet_size < 1) throw ValidationError("random machine needs a non-empty alphabet");
  if (!(params.unsafe_fraction >= 0.0 && params.unsafe_fraction <= 1.0)) {
    throw ValidationError("unsafe fraction must lie in [0, 1]");
  }
  Rng rng(params.seed);
  const std::size_t states = params.states;

  std::vector<StateId> candidates(states > 0 ? states - 1 : 0);
  std::iota(candidates.begin(), candidates.end(), 1);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  const auto unsafe_count =
      static_cast<std::size_t>(std::llround(params.unsafe_fraction * static_cast<double>(candidates.size())));
  std::vector<bool> safe(states, true);
  for (std::size_t k = 0; k < unsafe_count; ++k) safe[candidates[k]] = false;

  std::uniform_int_distribution<StateId> pick(0, static_cast<StateId>(states - 1));
  std::vector<MealyMachine::Edge> edges;
  edges.reserve(states * params.alphabet_size);
  for (StateId s = 0; s < states; ++s) {
    for (std::size_t i = 0; i < params.alphabet_size; ++i) {
      StateId target = pick(rng);
      if (params.absorbing_unsafe && !safe[s]) target = s;
      edges.push_back({target, safe[target] ? SymbolId{0} : SymbolId{1}});
    }
  }
  return MealyMachine(Alphabet(numbered("q", states)), Alphabet(numbered("i", params.alphabet_size)),
                      Alphabet({"ok", "bad"}), std::move(edges), 0, std::move(safe));
}

std::filesystem::path model_directory() {
  if (const char* env = std::getenv("PACSAFE_MODEL_DIR"); env != nullptr && *env != '\0') return env;
  std::filesystem::path installed = PACSAFE_INSTALL_MODEL_DIR;
  if (!installed.empty() && std::filesystem::is_directory(installed)) return installed;
  return PACSAFE_SOURCE_MODEL_DIR;
}

std::vector<std::string> bundled_model_names() {
  return {"alks_without", "alks_with", "coffee", "all_safe", "none_safe"};
}

MealyMachine load_bundled_model(std::string_view name) {
  return load_model(model_directory() / (std::string(name) + ".machine"));
}

}  // namespace pacsafe
