#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cartanlab/partial_bijection.hpp"

namespace cartanlab {

/// A finite inverse monoid realized as partial bijections of a fixed atom set.
///
/// Elements are duplicate-free and sorted canonically; 0 and 1 are always
/// present. The Cayley table and dagger map are precomputed, so products are
/// index lookups.
class FiniteInverseMonoid {
 public:
  /// Validates closure and materializes 0 and 1 if they are missing (see
  /// added_zero() / added_unit()). Throws ClosureError with a witness.
  static FiniteInverseMonoid from_elements(int atom_count, std::vector<PartialBijection> elements);

  /// Closure of `generators` under product and dagger. Throws SizeGuardError
  /// once more than `guard` elements have been produced.
  static FiniteInverseMonoid generated_by(int atom_count, std::span<const PartialBijection> generators,
                                          std::size_t guard = 100000);

  int atom_count() const { return atom_count_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<PartialBijection>& elements() const { return elements_; }
  const PartialBijection& operator[](std::size_t i) const { return elements_[i]; }

  std::optional<std::size_t> index_of(const PartialBijection& s) const;
  /// Throws DomainError if `s` is not an element.
  std::size_t require_index(const PartialBijection& s) const;
  bool contains(const PartialBijection& s) const { return index_of(s).has_value(); }

  std::size_t zero_index() const { return zero_; }
  std::size_t unit_index() const { return unit_; }
  std::size_t product(std::size_t i, std::size_t j) const { return table_[i * elements_.size() + j]; }
  std::size_t dagger_of(std::size_t i) const { return dagger_[i]; }
  bool is_idempotent(std::size_t i) const { return elements_[i].is_idempotent(); }
  /// Indices of E(S) in canonical order.
  const std::vector<std::size_t>& idempotents() const { return idempotents_; }

  bool added_zero() const { return added_zero_; }
  bool added_unit() const { return added_unit_; }

  bool operator==(const FiniteInverseMonoid& other) const {
    return atom_count_ == other.atom_count_ && elements_ == other.elements_;
  }

 private:
  FiniteInverseMonoid() = default;

  int atom_count_ = 0;
  std::vector<PartialBijection> elements_;
  std::unordered_map<PartialBijection, std::size_t> index_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> dagger_;
  std::vector<std::size_t> idempotents_;
  std::size_t zero_ = 0;
  std::size_t unit_ = 0;
  bool added_zero_ = false;
  bool added_unit_ = false;
};

struct ClassificationReport {
  bool inverse_monoid = false;
  std::size_t element_count = 0;
  std::vector<PartialBijection> idempotents;
  /// No two distinct elements induce the same conjugation e -> s e s†.
  bool fundamental = false;
  /// The centralizer of E(S) in S is E(S); agrees with `fundamental`.
  bool centralizer_is_idempotents = false;
  /// s†s = ss† for every s.
  bool clifford = false;
  /// When not fundamental: two distinct elements with the same action.
  std::optional<std::pair<PartialBijection, PartialBijection>> non_fundamental_witness;
};

/// Brute-force classification of an element list. Throws ClosureError with a
/// witness triple (s, t, st) or pair (s, s†) if the list is not closed.
ClassificationReport classify(int atom_count, std::span<const PartialBijection> elements);
ClassificationReport classify(const FiniteInverseMonoid& monoid);

}  // namespace cartanlab
