#pragma once

#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pacsafe/bigint.hpp"
#include "pacsafe/mealy.hpp"

namespace pacsafe {

/// A generalized path: a partial map from time step to input symbol. Steps
/// are 1-indexed in the public interface; unbound steps are don't-cares.
class Monomial {
 public:
  explicit Monomial(std::size_t horizon);
  static Monomial from_sequence(std::span<const SymbolId> seq);

  std::size_t horizon() const noexcept { return slots_.size(); }
  /// Number of bound steps.
  std::size_t length() const noexcept { return length_; }

  std::optional<SymbolId> at(std::size_t step) const { return slots_.at(index(step)); }
  bool is_bound(std::size_t step) const { return at(step).has_value(); }

  Monomial& bind(std::size_t step, SymbolId symbol);
  Monomial& unbind(std::size_t step);
  Monomial without(std::size_t step) const { return Monomial(*this).unbind(step); }

  /// 0-based view, one slot per step.
  const std::vector<std::optional<SymbolId>>& slots() const noexcept { return slots_; }

  /// True iff every binding of *this is also a binding of `other`, i.e. every
  /// expansion of `other` is an expansion of *this.
  bool subsumes(const Monomial& other) const;

  BigInt expansion_size(std::size_t alphabet_size) const { return ipow(alphabet_size, horizon() - length_); }

  std::string to_string(const Alphabet& inputs) const;

  bool operator==(const Monomial& other) const { return slots_ == other.slots_; }

 private:
  std::size_t index(std::size_t step) const;

  std::vector<std::optional<SymbolId>> slots_;
  std::size_t length_ = 0;
};

/// Disjunction of monomials sharing one horizon; no syntactic duplicates.
class MonomialSet {
 public:
  explicit MonomialSet(std::size_t horizon) : horizon_(horizon) {}

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  /// Returns false (and leaves the set unchanged) for a duplicate.
  bool insert(Monomial m);

  const std::vector<Monomial>& members() const noexcept { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::size_t horizon_;
  std::vector<Monomial> members_;
};

/// Lazily enumerates the sequences a monomial stands for. Don't-care steps
/// run over the alphabet in canonical order; the earliest free step varies
/// slowest.
class Expansion {
 public:
  class iterator {
   public:
    using value_type = InputSequence;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    const InputSequence& operator*() const { return seq_; }
    const InputSequence* operator->() const { return &seq_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    friend class Expansion;
    InputSequence seq_;
    const std::vector<std::size_t>* free_ = nullptr;
    std::size_t alphabet_size_ = 0;
    bool done_ = true;
  };

  Expansion(const Monomial& m, std::size_t alphabet_size);

  iterator begin() const;
  std::default_sentinel_t end() const { return {}; }
  BigInt size() const { return ipow(alphabet_size_, free_.size()); }

 private:
  InputSequence base_;
  std::vector<std::size_t> free_;
  std::size_t alphabet_size_;
};

Expansion expand(const Monomial& m, std::size_t alphabet_size);

bool covers(const Monomial& m, std::span<const SymbolId> seq);

/// Sound, incomplete: true iff a single member of `g` subsumes `v`.
bool implied_by_set(const Monomial& v, const MonomialSet& g);

/// Sum of |I|^(n - l_k) over members; over-counts overlapping members.
BigInt count_formula(const MonomialSet& g, std::size_t alphabet_size);

inline constexpr std::uint64_t kDefaultCountNodeCap = 50'000'000;

/// Number of distinct sequences covered by the union of `g`. Throws
/// ResourceError once the search visits more than `node_cap` nodes.
BigInt count_exact(const MonomialSet& g, std::size_t alphabet_size, std::uint64_t node_cap = kDefaultCountNodeCap);

/// Text forms: `{1=clean, 2=water}`; a set is an `n=<horizon>` line followed
/// by one monomial per line.
Monomial parse_monomial(std::string_view text, std::size_t horizon, const Alphabet& inputs);
std::string to_text(const MonomialSet& g, const Alphabet& inputs);
MonomialSet parse_monomial_set(std::string_view text, const Alphabet& inputs);

}  // namespace pacsafe
