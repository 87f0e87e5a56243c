#include "pacsafe/mealy.hpp"

#include <fstream>
#include <sstream>

#include "pacsafe/errors.hpp"

namespace pacsafe {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw ValidationError("empty symbol name");
    if (!index_.emplace(names_[i], static_cast<SymbolId>(i)).second) {
      throw ValidationError("duplicate symbol '" + names_[i] + "'");
    }
  }
}

std::optional<SymbolId> Alphabet::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SymbolId Alphabet::at(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw ValidationError("unknown symbol '" + std::string(name) + "'");
}

MealyMachine::MealyMachine(Alphabet states, Alphabet inputs, Alphabet outputs, std::vector<Edge> edges,
                           StateId initial, std::vector<bool> safe)
    : states_(std::move(states)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      edges_(std::move(edges)),
      initial_(initial),
      safe_(std::move(safe)) {
  if (states_.empty()) throw ValidationError("machine has no states");
  if (inputs_.empty()) throw ValidationError("machine has an empty input alphabet");
  if (initial_ >= states_.size()) throw ValidationError("initial state is not a member of the state set");
  if (safe_.size() != states_.size()) throw ValidationError("safe-state labeling does not cover the state set");
  if (edges_.size() != states_.size() * inputs_.size()) {
    throw ValidationError("transition table must have |S|*|I| entries");
  }
  for (const Edge& e : edges_) {
    if (e.target >= states_.size()) throw ValidationError("transition targets an undeclared state");
    if (e.output >= outputs_.size()) throw ValidationError("transition emits an undeclared output");
  }
}

std::vector<StateId> MealyMachine::safe_states() const {
  std::vector<StateId> out;
  for (StateId s = 0; s < safe_.size(); ++s) {
    if (safe_[s]) out.push_back(s);
  }
  return out;
}

StateId MealyMachine::run(StateId start, std::span<const SymbolId> seq) const {
  StateId state = start;
  for (SymbolId input : seq) state = edge(state, input).target;
  return state;
}

void MealyMachine::check_sequence(std::span<const SymbolId> seq) const {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] >= inputs_.size()) {
      throw ValidationError("input symbol #" + std::to_string(seq[i]) + " at position " + std::to_string(i + 1) +
                            " is not in the input alphabet");
    }
  }
}

InputSequence MealyMachine::encode(std::span<const std::string> symbols) const {
  InputSequence seq;
  seq.reserve(symbols.size());
  for (const auto& s : symbols) seq.push_back(inputs_.at(s));
  return seq;
}

MachineBuilder::MachineBuilder(std::vector<std::string> states, std::vector<std::string> inputs,
                               std::vector<std::string> outputs)
    : states_(std::move(states)), inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  edges_.resize(states_.size() * inputs_.size());
  safe_.assign(states_.size(), false);
}

MachineBuilder& MachineBuilder::initial(std::string_view state) {
  initial_ = states_.at(state);
  return *this;
}

MachineBuilder& MachineBuilder::safe(std::vector<std::string> states) {
  safe_.assign(states_.size(), false);
  for (const auto& s : states) safe_[states_.at(s)] = true;
  return *this;
}

MachineBuilder& MachineBuilder::edge(std::string_view from, std::string_view input, std::string_view to,
                                     std::string_view output) {
  edges_[states_.at(from) * inputs_.size() + inputs_.at(input)] =
      MealyMachine::Edge{states_.at(to), outputs_.at(output)};
  return *this;
}

MealyMachine MachineBuilder::build() const {
  if (!initial_) throw ValidationError("no initial state given");
  std::vector<MealyMachine::Edge> edges;
  edges.reserve(edges_.size());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (!edges_[k]) {
      throw ValidationError("missing transition for state '" + states_.name(k / inputs_.size()) + "' on input '" +
                            inputs_.name(k % inputs_.size()) + "'");
    }
    edges.push_back(*edges_[k]);
  }
  return MealyMachine(states_, inputs_, outputs_, std::move(edges), *initial_, safe_);
}

RunResult trace_from(const MealyMachine& machine, StateId start, std::span<const SymbolId> seq) {
  machine.check_sequence(seq);
  if (start >= machine.states().size()) throw ValidationError("start state out of range");
  RunResult result;
  result.outputs.reserve(seq.size());
  StateId state = start;
  for (SymbolId input : seq) {
    const auto& e = machine.edge(state, input);
    result.outputs.push_back(e.output);
    state = e.target;
  }
  result.final_state = state;
  result.safe = machine.is_safe_state(state);
  return result;
}

RunResult trace(const MealyMachine& machine, std::span<const SymbolId> seq) {
  return trace_from(machine, machine.initial(), seq);
}

RunResult trace(const MealyMachine& machine, std::span<const std::string> symbols) {
  const InputSequence seq = machine.encode(symbols);
  return trace(machine, seq);
}

std::vector<StateId> ReachableSet::states() const {
  std::vector<StateId> out;
  out.reserve(witnesses.size());
  for (const auto& [state, _] : witnesses) out.push_back(state);
  return out;
}

void for_each_sequence(std::size_t alphabet_size, std::size_t n, std::uint64_t cap,
                       const std::function<void(std::span<const SymbolId>)>& visit) {
  if (alphabet_size == 0) return;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / alphabet_size) {
      throw ResourceError("enumerating " + std::to_string(alphabet_size) + "^" + std::to_string(n) +
                          " sequences exceeds the cap of " + std::to_string(cap));
    }
    total *= alphabet_size;
  }
  if (total > cap) throw ResourceError("enumeration exceeds the cap of " + std::to_string(cap));

  InputSequence seq(n, 0);
  while (true) {
    visit(seq);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++seq[pos] < alphabet_size) break;
      seq[pos] = 0;
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

ReachableSet reachable_set(const MealyMachine& machine, std::size_t n, std::uint64_t enumeration_cap) {
  if (n < 1) throw ValidationError("horizon must be at least 1");
  ReachableSet result;
  for_each_sequence(machine.inputs().size(), n, enumeration_cap, [&](std::span<const SymbolId> seq) {
    StateId s = machine.run(machine.initial(), seq);
    if (!result.witnesses.contains(s)) result.witnesses.emplace(s, InputSequence(seq.begin(), seq.end()));
  });
  return result;
}

// ---------------------------------------------------------------------------
// Model file parsing

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    tokens.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return tokens;
}

struct Header {
  std::vector<Token> values;
  std::size_t line = 0;
  bool present = false;
};

struct RawEdge {
  Token from, input, to, output;
  std::size_t line;
};

}  // namespace

MealyMachine parse_model(std::string_view text) {
  std::map<std::string, Header, std::less<>> headers{
      {"states", {}}, {"inputs", {}}, {"outputs", {}}, {"initial", {}}, {"safe", {}}};
  std::vector<RawEdge> raw_edges;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    const std::string& head = tokens.front().text;
    if (head.size() > 1 && head.back() == ':') {
      auto it = headers.find(std::string_view(head).substr(0, head.size() - 1));
      if (it == headers.end()) throw ParseError(line_no, tokens.front().column, "unknown header '" + head + "'");
      if (it->second.present) throw ParseError(line_no, tokens.front().column, "duplicate header '" + head + "'");
      it->second.present = true;
      it->second.line = line_no;
      it->second.values.assign(tokens.begin() + 1, tokens.end());
      continue;
    }

    if (tokens.size() != 6 || tokens[2].text != "->" || tokens[4].text != "/") {
      std::size_t col = tokens.size() > 2 ? tokens[std::min<std::size_t>(tokens.size() - 1, 2)].column
                                          : tokens.back().column;
      throw ParseError(line_no, col, "expected transition of the form 'STATE INPUT -> STATE / OUTPUT'");
    }
    raw_edges.push_back({tokens[0], tokens[1], tokens[3], tokens[5], line_no});
  }

  auto names_of = [](const Header& h) {
    std::vector<std::string> names;
    for (const auto& t : h.values) names.push_back(t.text);
    return names;
  };
  for (const char* required : {"inputs", "outputs", "initial", "safe"}) {
    if (!headers.at(required).present) throw ValidationError(std::string("missing '") + required + ":' header");
  }

  const Header& initial_h = headers.at("initial");
  if (initial_h.values.size() != 1) {
    throw ParseError(initial_h.line, 1, "'initial:' takes exactly one state");
  }

  auto alphabet_of = [&](const char* key) {
    const Header& h = headers.at(key);
    try {
      return Alphabet(names_of(h));
    } catch (const ValidationError& e) {
      throw ParseError(h.line, 1, std::string(key) + ": " + e.what());
    }
  };

  Alphabet inputs = alphabet_of("inputs");
  if (inputs.empty()) throw ParseError(headers.at("inputs").line, 1, "input alphabet is empty");
  Alphabet outputs = alphabet_of("outputs");

  Alphabet states;
  if (headers.at("states").present) {
    states = alphabet_of("states");
  } else {
    std::vector<std::string> order;
    std::map<std::string, bool, std::less<>> seen;
    for (const auto& e : raw_edges) {
      if (seen.emplace(e.from.text, true).second) order.push_back(e.from.text);
    }
    states = Alphabet(std::move(order));
  }

  auto state_of = [&](const Token& t, std::size_t line) {
    if (auto id = states.find(t.text)) return *id;
    throw ParseError(line, t.column, "undeclared state '" + t.text + "'");
  };

  const Token& init_tok = initial_h.values.front();
  if (!states.find(init_tok.text)) {
    throw ValidationError("initial state '" + init_tok.text + "' is not in the state list");
  }
  StateId initial = *states.find(init_tok.text);

  std::vector<bool> safe(states.size(), false);
  for (const auto& t : headers.at("safe").values) safe[state_of(t, headers.at("safe").line)] = true;

  std::vector<std::optional<MealyMachine::Edge>> table(states.size() * inputs.size());
  for (const auto& e : raw_edges) {
    StateId from = state_of(e.from, e.line);
    auto input = inputs.find(e.input.text);
    if (!input) throw ParseError(e.line, e.input.column, "undeclared input '" + e.input.text + "'");
    StateId to = state_of(e.to, e.line);
    auto output = outputs.find(e.output.text);
    if (!output) throw ParseError(e.line, e.output.column, "undeclared output '" + e.output.text + "'");
    auto& slot = table[from * inputs.size() + *input];
    if (slot) {
      throw ParseError(e.line, e.from.column,
                       "duplicate transition for state '" + e.from.text + "' on input '" + e.input.text + "'");
    }
    slot = MealyMachine::Edge{to, *output};
  }

  std::vector<MealyMachine::Edge> edges;
  edges.reserve(table.size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (!table[k]) {
      throw ValidationError("missing transition for state '" + states.name(k / inputs.size()) + "' on input '" +
                            inputs.name(k % inputs.size()) + "'");
    }
    edges.push_back(*table[k]);
  }
  return MealyMachine(std::move(states), std::move(inputs), std::move(outputs), std::move(edges), initial,
                      std::move(safe));
}

MealyMachine load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.filename().string() + ": " + e.what());
  }
}

std::string serialize_model(const MealyMachine& machine) {
  std::ostringstream out;
  auto join = [&](const std::vector<std::string>& names) {
    for (const auto& n : names) out << ' ' << n;
    out << '\n';
  };
  out << "states:";
  join(machine.states().names());
  out << "inputs:";
  join(machine.inputs().names());
  out << "outputs:";
  join(machine.outputs().names());
  out << "initial: " << machine.states().name(machine.initial()) << '\n';
  out << "safe:";
  std::vector<std::string> safe;
  for (StateId s : machine.safe_states()) safe.push_back(machine.states().name(s));
  join(safe);
  for (StateId s = 0; s < machine.states().size(); ++s) {
    for (SymbolId i = 0; i < machine.inputs().size(); ++i) {
      const auto& e = machine.edge(s, i);
      out << machine.states().name(s) << ' ' << machine.inputs().name(i) << " -> " << machine.states().name(e.target)
          << " / " << machine.outputs().name(e.output) << '\n';
    }
  }
  return out.str();
}

}  // namespace pacsafe
