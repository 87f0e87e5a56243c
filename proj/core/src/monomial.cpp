#include "pacsafe/monomial.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "pacsafe/errors.hpp"

namespace pacsafe {

Monomial::Monomial(std::size_t horizon) : slots_(horizon) {
  if (horizon == 0) throw ValidationError("monomial horizon must be at least 1");
}

Monomial Monomial::from_sequence(std::span<const SymbolId> seq) {
  Monomial m(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) m.slots_[i] = seq[i];
  m.length_ = seq.size();
  return m;
}

std::size_t Monomial::index(std::size_t step) const {
  if (step < 1 || step > slots_.size()) {
    throw ValidationError("time step " + std::to_string(step) + " outside [1.." + std::to_string(slots_.size()) + "]");
  }
  return step - 1;
}

Monomial& Monomial::bind(std::size_t step, SymbolId symbol) {
  auto& slot = slots_[index(step)];
  if (!slot) ++length_;
  slot = symbol;
  return *this;
}

Monomial& Monomial::unbind(std::size_t step) {
  auto& slot = slots_[index(step)];
  if (slot) --length_;
  slot.reset();
  return *this;
}

bool Monomial::subsumes(const Monomial& other) const {
  if (other.horizon() != horizon()) throw ValidationError("monomial horizon mismatch");
  if (length_ > other.length_) return false;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i] && slots_[i] != other.slots_[i]) return false;
  }
  return true;
}

std::string Monomial::to_string(const Alphabet& inputs) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (!slots_[i]) continue;
    if (!first) out += ", ";
    first = false;
    out += std::to_string(i + 1) + "=" + inputs.name(*slots_[i]);
  }
  return out + "}";
}

bool MonomialSet::insert(Monomial m) {
  if (m.horizon() != horizon_) throw ValidationError("monomial horizon does not match the set's horizon");
  if (std::find(members_.begin(), members_.end(), m) != members_.end()) return false;
  members_.push_back(std::move(m));
  return true;
}

Expansion::Expansion(const Monomial& m, std::size_t alphabet_size) : alphabet_size_(alphabet_size) {
  if (alphabet_size == 0) throw ValidationError("alphabet must be non-empty");
  base_.resize(m.horizon(), 0);
  for (std::size_t i = 0; i < m.horizon(); ++i) {
    const auto& slot = m.slots()[i];
    if (!slot) {
      free_.push_back(i);
    } else if (*slot >= alphabet_size) {
      throw ValidationError("bound symbol at step " + std::to_string(i + 1) + " is not in the alphabet");
    } else {
      base_[i] = *slot;
    }
  }
}

Expansion::iterator Expansion::begin() const {
  iterator it;
  it.seq_ = base_;
  it.free_ = &free_;
  it.alphabet_size_ = alphabet_size_;
  it.done_ = false;
  return it;
}

Expansion::iterator& Expansion::iterator::operator++() {
  for (auto pos = free_->rbegin(); pos != free_->rend(); ++pos) {
    if (++seq_[*pos] < alphabet_size_) return *this;
    seq_[*pos] = 0;
  }
  done_ = true;
  return *this;
}

Expansion expand(const Monomial& m, std::size_t alphabet_size) { return Expansion(m, alphabet_size); }

bool covers(const Monomial& m, std::span<const SymbolId> seq) {
  if (seq.size() != m.horizon()) {
    throw ValidationError("sequence length " + std::to_string(seq.size()) + " does not match horizon " +
                          std::to_string(m.horizon()));
  }
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& slot = m.slots()[i];
    if (slot && *slot != seq[i]) return false;
  }
  return true;
}

bool implied_by_set(const Monomial& v, const MonomialSet& g) {
  if (v.horizon() != g.horizon()) throw ValidationError("monomial horizon does not match the set's horizon");
  return std::any_of(g.begin(), g.end(), [&](const Monomial& m) { return m.subsumes(v); });
}

BigInt count_formula(const MonomialSet& g, std::size_t alphabet_size) {
  BigInt total = 0;
  for (const auto& m : g) total += m.expansion_size(alphabet_size);
  return total;
}

namespace {

// Splits the sequence space on one step at a time. A branch is closed as
// soon as some active monomial has no bindings left, at which point every
// completion of the prefix is covered.
class UnionCounter {
 public:
  UnionCounter(const MonomialSet& g, std::size_t alphabet_size, std::uint64_t node_cap)
      : n_(g.horizon()), alphabet_size_(alphabet_size), node_cap_(node_cap) {
    for (const auto& m : g) {
      std::size_t last = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (m.slots()[i]) last = i + 1;
      }
      members_.push_back({&m, last});
    }
    powers_.reserve(n_ + 1);
    for (std::size_t k = 0; k <= n_; ++k) powers_.push_back(ipow(alphabet_size, k));
  }

  BigInt run() {
    std::vector<std::uint32_t> active(members_.size());
    for (std::uint32_t i = 0; i < active.size(); ++i) active[i] = i;
    return count(active, 0);
  }

 private:
  struct Member {
    const Monomial* m;
    std::size_t last_bound;  // 1-based; 0 when unbound everywhere
  };

  BigInt count(const std::vector<std::uint32_t>& active, std::size_t pos) {
    if (++nodes_ > node_cap_) {
      throw ResourceError("exact union count exceeded its node cap of " + std::to_string(node_cap_));
    }
    if (active.empty()) return 0;
    for (auto id : active) {
      if (members_[id].last_bound <= pos) return powers_[n_ - pos];
    }

    std::vector<std::uint32_t> unbound;
    std::vector<std::vector<std::uint32_t>> by_symbol(alphabet_size_);
    for (auto id : active) {
      const auto& slot = members_[id].m->slots()[pos];
      if (slot) {
        by_symbol[*slot].push_back(id);
      } else {
        unbound.push_back(id);
      }
    }

    BigInt total = 0;
    std::size_t plain = 0;
    for (std::size_t a = 0; a < alphabet_size_; ++a) {
      if (by_symbol[a].empty()) {
        ++plain;
        continue;
      }
      std::vector<std::uint32_t> next = unbound;
      next.insert(next.end(), by_symbol[a].begin(), by_symbol[a].end());
      total += count(next, pos + 1);
    }
    if (plain > 0) total += plain * count(unbound, pos + 1);
    return total;
  }

  std::size_t n_;
  std::size_t alphabet_size_;
  std::uint64_t node_cap_;
  std::uint64_t nodes_ = 0;
  std::vector<Member> members_;
  std::vector<BigInt> powers_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::size_t parse_size(std::string_view s, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError(std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

BigInt count_exact(const MonomialSet& g, std::size_t alphabet_size, std::uint64_t node_cap) {
  if (alphabet_size == 0) throw ValidationError("alphabet must be non-empty");
  for (const auto& m : g) {
    for (const auto& slot : m.slots()) {
      if (slot && *slot >= alphabet_size) throw ValidationError("bound symbol is not in the alphabet");
    }
  }
  return UnionCounter(g, alphabet_size, node_cap).run();
}

Monomial parse_monomial(std::string_view text, std::size_t horizon, const Alphabet& inputs) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw ValidationError("monomial must be enclosed in braces: '" + std::string(text) + "'");
  }
  Monomial m(horizon);
  std::string_view body = trim(text.substr(1, text.size() - 2));
  while (!body.empty()) {
    auto comma = body.find(',');
    std::string_view item = trim(body.substr(0, comma));
    body = comma == std::string_view::npos ? std::string_view{} : trim(body.substr(comma + 1));
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ValidationError("binding must read 'step=symbol': '" + std::string(item) + "'");
    std::size_t step = parse_size(trim(item.substr(0, eq)), "time step");
    if (step >= 1 && step <= horizon && m.is_bound(step)) {
      throw ValidationError("time step " + std::to_string(step) + " bound twice");
    }
    m.bind(step, inputs.at(trim(item.substr(eq + 1))));
  }
  return m;
}

std::string to_text(const MonomialSet& g, const Alphabet& inputs) {
  std::ostringstream out;
  out << "n=" << g.horizon() << '\n';
  for (const auto& m : g) out << m.to_string(inputs) << '\n';
  return out.str();
}

MonomialSet parse_monomial_set(std::string_view text, const Alphabet& inputs) {
  std::optional<MonomialSet> set;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    if (!set) {
      if (!line.starts_with("n=")) throw ValidationError("monomial set must start with an 'n=<horizon>' line");
      set.emplace(parse_size(trim(line.substr(2)), "horizon"));
      continue;
    }
    if (!set->insert(parse_monomial(line, set->horizon(), inputs))) {
      throw ValidationError("duplicate monomial '" + std::string(line) + "'");
    }
  }
  if (!set) throw ValidationError("empty monomial set text");
  return std::move(*set);
}

}  // namespace pacsafe
