#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pacsafe {

using SymbolId = std::uint32_t;
using StateId = std::uint32_t;

/// Input symbols by index into the machine's input alphabet.
using InputSequence = std::vector<SymbolId>;

/// Ordered, duplicate-free set of names. Declaration order is the canonical
/// enumeration order.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(SymbolId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<SymbolId> find(std::string_view name) const;
  /// Throws ValidationError for unknown names.
  SymbolId at(std::string_view name) const;

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, SymbolId, std::less<>> index_;
};

struct RunResult {
  StateId final_state = 0;
  std::vector<SymbolId> outputs;
  bool safe = false;

  bool operator==(const RunResult&) const = default;
};

/// Deterministic, total Mealy machine with a designated safe-state subset.
/// Immutable once constructed.
class MealyMachine {
 public:
  struct Edge {
    StateId target = 0;
    SymbolId output = 0;
  };

  /// `edges` is state-major: edges[state * inputs.size() + input].
  MealyMachine(Alphabet states, Alphabet inputs, Alphabet outputs, std::vector<Edge> edges, StateId initial,
               std::vector<bool> safe);

  const Alphabet& states() const noexcept { return states_; }
  const Alphabet& inputs() const noexcept { return inputs_; }
  const Alphabet& outputs() const noexcept { return outputs_; }
  StateId initial() const noexcept { return initial_; }

  bool is_safe_state(StateId state) const { return safe_.at(state); }
  std::vector<StateId> safe_states() const;

  const Edge& edge(StateId state, SymbolId input) const { return edges_[state * inputs_.size() + input]; }
  StateId transition(SymbolId input, StateId state) const { return edge(state, input).target; }
  SymbolId output(SymbolId input, StateId state) const { return edge(state, input).output; }

  /// Final state only; no output trace, no validation.
  StateId run(StateId start, std::span<const SymbolId> seq) const;

  void check_sequence(std::span<const SymbolId> seq) const;
  InputSequence encode(std::span<const std::string> symbols) const;

 private:
  Alphabet states_;
  Alphabet inputs_;
  Alphabet outputs_;
  std::vector<Edge> edges_;
  StateId initial_;
  std::vector<bool> safe_;
};

/// Incremental construction by name, used for bundled models and tests.
class MachineBuilder {
 public:
  MachineBuilder(std::vector<std::string> states, std::vector<std::string> inputs, std::vector<std::string> outputs);

  MachineBuilder& initial(std::string_view state);
  MachineBuilder& safe(std::vector<std::string> states);
  MachineBuilder& edge(std::string_view from, std::string_view input, std::string_view to, std::string_view output);

  MealyMachine build() const;

 private:
  Alphabet states_;
  Alphabet inputs_;
  Alphabet outputs_;
  std::vector<std::optional<MealyMachine::Edge>> edges_;
  std::optional<StateId> initial_;
  std::vector<bool> safe_;
};

RunResult trace(const MealyMachine& machine, std::span<const SymbolId> seq);
RunResult trace_from(const MealyMachine& machine, StateId start, std::span<const SymbolId> seq);
RunResult trace(const MealyMachine& machine, std::span<const std::string> symbols);

/// Reached states mapped to one witness sequence each.
struct ReachableSet {
  std::map<StateId, InputSequence> witnesses;

  std::vector<StateId> states() const;
  bool contains(StateId state) const { return witnesses.contains(state); }
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

ReachableSet reachable_set(const MealyMachine& machine, std::size_t n,
                           std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// Calls `visit` for every sequence in I^n in lexicographic order (position 1
/// most significant). Throws ResourceError when |I|^n exceeds `cap`.
void for_each_sequence(std::size_t alphabet_size, std::size_t n, std::uint64_t cap,
                       const std::function<void(std::span<const SymbolId>)>& visit);

MealyMachine parse_model(std::string_view text);
MealyMachine load_model(const std::filesystem::path& path);
std::string serialize_model(const MealyMachine& machine);

}  // namespace pacsafe
