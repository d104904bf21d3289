#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cartanlab/inverse_monoid.hpp"
#include "cartanlab/phased.hpp"

namespace cartanlab {

/// Normalized 2-cocycle c: S x S -> phase exponents mod k.
///
/// Entry (s, t) is a full-length phase array supported on dom(st). Entries
/// for pairs with s or t idempotent, or st = 0, are implied zero. Every other
/// pair must be set explicitly before the table is validated.
class CocycleTable {
 public:
  /// All-zero table with every required entry present.
  static CocycleTable trivial(const FiniteInverseMonoid& base, int k);
  /// Table with no explicit entries.
  static CocycleTable empty(const FiniteInverseMonoid& base, int k);

  int k() const { return k_; }
  std::size_t monoid_size() const { return size_; }
  int atom_count() const { return n_; }

  /// True when (s, t) needs an explicit entry.
  bool required(std::size_t s, std::size_t t) const { return required_[s * size_ + t]; }
  bool has(std::size_t s, std::size_t t) const { return present_[s * size_ + t]; }
  /// Entry (s, t); zero for implied entries. Throws FormatError when a
  /// required entry is missing.
  const std::vector<int>& at(std::size_t s, std::size_t t) const;
  /// Stores `phase` reduced mod k; its support is checked by validate_cocycle.
  void set(std::size_t s, std::size_t t, std::vector<int> phase);

  /// Same monoid shape, same k and the same value (or absence) on every pair.
  bool operator==(const CocycleTable& other) const;

 private:
  CocycleTable(const FiniteInverseMonoid& base, int k, bool fill);

  int n_ = 0;
  int k_ = 1;
  std::size_t size_ = 0;
  std::vector<AtomSet> support_;
  std::vector<bool> required_;
  std::vector<bool> present_;
  std::vector<std::vector<int>> entries_;
  std::vector<int> zeros_;
};

struct CocycleViolation {
  std::size_t s = 0;
  std::size_t t = 0;
  std::size_t u = 0;
  std::string what;
};

struct CocycleReport {
  bool pass = true;
  bool normalized = true;
  bool supported = true;
  bool identity = true;
  std::vector<CocycleViolation> violations;
};

/// Checks support, normalization and the cocycle identity over all triples.
/// Throws FormatError if a required entry is missing.
CocycleReport validate_cocycle(const FiniteInverseMonoid& base, const CocycleTable& c);

/// The extension P -> G -> S with G = {(s, p)} and product twisted by c.
class Extension {
 public:
  /// Throws DomainError if k < 1 or the table does not match the monoid.
  Extension(FiniteInverseMonoid base, CocycleTable cocycle);

  const FiniteInverseMonoid& base() const { return base_; }
  const CocycleTable& cocycle() const { return cocycle_; }
  int k() const { return cocycle_.k(); }
  int atom_count() const { return base_.atom_count(); }

  PhasedElement multiply(const PhasedElement& v, const PhasedElement& w) const;
  PhasedElement dagger(const PhasedElement& v) const;
  /// Restriction to the set where both bijection and phase agree.
  PhasedElement meet(const PhasedElement& v, const PhasedElement& w) const;
  bool leq(const PhasedElement& v, const PhasedElement& w) const;
  /// Bijection in S and phases in [0, k).
  bool contains(const PhasedElement& v) const;
  PhasedElement unit() const;
  PhasedOps ops() const;

  /// |G| = sum over s of k^|dom s|.
  std::size_t order() const;
  /// All of G in canonical order. Throws SizeGuardError beyond `guard`.
  std::vector<PhasedElement> elements(std::size_t guard = 1000000) const;
  /// The fiber q^-1(s).
  std::vector<PhasedElement> fiber(const PartialBijection& s) const;

 private:
  FiniteInverseMonoid base_;
  CocycleTable cocycle_;
};

/// A section j of q, stored by the canonical index of S.
class Section {
 public:
  explicit Section(std::vector<PhasedElement> values) : values_(std::move(values)) {}

  const PhasedElement& operator[](std::size_t i) const { return values_[i]; }
  const PhasedElement& of(const Extension& ext, const PartialBijection& s) const {
    return values_[ext.base().require_index(s)];
  }
  std::size_t size() const { return values_.size(); }
  const std::vector<PhasedElement>& values() const { return values_; }
  void set(std::size_t i, PhasedElement v) { values_[i] = std::move(v); }

  bool operator==(const Section&) const = default;

 private:
  std::vector<PhasedElement> values_;
};

/// Builds an order preserving section: greedy maximal meet-orthogonal B
/// containing 1, zero-phase lifts on B, j(se) = j(s)j(e) below B, and the
/// glued correction w h on the remainder.
Section order_preserving_section(const Extension& ext);

struct SectionReport {
  /// j(1) = 1 and s <= t implies j(s) <= j(t).
  bool order_preserving = true;
  /// j(1) = 1 and j(esf) = j(e) j(s) j(f).
  bool idempotent_compatible = true;
  /// j(s ∧ t) = j(s) ∧ j(t) and j(1) = 1.
  bool meet_preserving = true;
  /// j(s†) = j(s)†.
  bool dagger_preserving = true;
  std::string witness_a;
  std::string witness_b;
  std::string witness_c;

  bool all() const { return order_preserving && idempotent_compatible && meet_preserving && dagger_preserving; }
  bool consistent() const {
    return order_preserving == idempotent_compatible && idempotent_compatible == meet_preserving;
  }
};

/// Checks the three equivalent characterizations independently.
/// Throws DomainError if j is not a section of q.
SectionReport validate_section(const Extension& ext, const Section& j);

/// j(st)† j(s) j(t), asserted to lie in P.
PhasedElement lausch_alpha(const Extension& ext, const Section& j, std::size_t s, std::size_t t);
/// j(q(v)s)† v j(s), asserted to lie in P.
PhasedElement sigma(const Extension& ext, const Section& j, const PhasedElement& v, std::size_t s);
/// v j(q(v) ∧ 1).
PhasedElement delta(const Extension& ext, const Section& j, const PhasedElement& v);

/// sigma(v, s) from the germ form: phase at y is
/// h_v(s(y)) + alpha-germ(q(v)s(y), s(y), y), where h_v = j(q(v))† v.
PhasedElement sigma_from_germs(const Extension& ext, const Section& j, const PhasedElement& v, std::size_t s);

/// A 1-cochain b: S -> phases, indexed like S.
using Cochain = std::vector<std::vector<int>>;

/// (δb)(s, t) = b(s)∘t + b(t) - b(st).
CocycleTable coboundary(const FiniteInverseMonoid& base, int k, const Cochain& b);
/// c + δb.
CocycleTable perturb(const FiniteInverseMonoid& base, const CocycleTable& c, const Cochain& b);
/// Cochain determined by values on off-diagonal pairs (x, y) of R:
/// b(t)(y) = beta(t(y), y), zero on fixed points.
Cochain cochain_from_pairs(const FiniteInverseMonoid& base, const std::vector<std::vector<int>>& beta);

/// Searches for b with c2 = c1 + δb. Every coboundary between normalized
/// cocycles is restriction-compatible, so b is determined by its values on
/// the off-diagonal pairs of R and the search covers k^(|R| - n) candidates.
/// Requires singleton idempotent atoms. Throws SizeGuardError beyond `guard`.
std::optional<Cochain> cohomologous(const FiniteInverseMonoid& base, const CocycleTable& c1, const CocycleTable& c2,
                                    std::size_t guard = 10000000);
std::optional<Cochain> is_trivial(const FiniteInverseMonoid& base, const CocycleTable& c,
                                  std::size_t guard = 10000000);

/// Every valid normalized cocycle by enumerating raw table entries.
std::vector<CocycleTable> enumerate_cocycles_raw(const FiniteInverseMonoid& base, int k, std::size_t guard = 1000000);
/// Every valid normalized cocycle by enumerating germs on composable triples
/// (x, z, y) of R with x != z != y.
std::vector<CocycleTable> enumerate_cocycles_germs(const FiniteInverseMonoid& base, int k,
                                                   std::size_t guard = 1000000);

struct EquivalenceWitness {
  /// theta(s) = pi s pi^-1 with pi given as atom images.
  std::vector<int> atom_permutation;
  /// c1 = pullback(c2) + δb, so G1 -> G2, (s, p) -> (theta s, (p + b(s))∘pi^-1).
  Cochain coboundary;
};

/// Applies the equivalence map of `witness` to v in G1.
PhasedElement apply_equivalence(const Extension& ext1, const EquivalenceWitness& witness, const PhasedElement& v);

/// Searches atom permutations pi with pi S1 pi^-1 = S2, then a coboundary
/// between c1 and the pulled-back c2. Throws SizeGuardError when |S| > guard.
std::optional<EquivalenceWitness> extensions_equivalent(const Extension& ext1, const Extension& ext2,
                                                        std::size_t guard = 40);

}  // namespace cartanlab
