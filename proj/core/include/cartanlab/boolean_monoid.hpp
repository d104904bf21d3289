#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cartanlab/inverse_monoid.hpp"

namespace cartanlab {

/// Outcome of one axiom; a failure always carries concrete witness elements.
struct AxiomCheck {
  bool pass = true;
  std::string detail;
  std::vector<PartialBijection> witness;

  void fail(std::string why, std::vector<PartialBijection> elements) {
    if (!pass) return;
    pass = false;
    detail = std::move(why);
    witness = std::move(elements);
  }
};

struct AxiomReport {
  /// E(S) is a Boolean algebra.
  AxiomCheck boolean_a;
  /// Every pair has a meet in S.
  AxiomCheck boolean_b;
  /// Every orthogonal pair has its join in S.
  AxiomCheck boolean_c;
  /// E(S) is a complete Boolean algebra (automatic once finite and Boolean).
  AxiomCheck locally_complete;
  /// Joins of orthogonal families: binary joins plus every maximal family.
  AxiomCheck complete_d;
  bool fundamental = false;
  /// Always true: a finite discrete character space is hyperstonean.
  bool hyperstonean = true;
  std::string hyperstonean_note = "finite discrete space";
  bool cartan = false;
  /// E(S) has non-singleton atoms, so S must be re-based onto them.
  bool rebased = false;
  std::size_t character_count = 0;
  std::size_t maximal_families_checked = 0;
};

/// Verifies the Boolean / complete / Cartan inverse monoid axioms.
/// `family_guard` bounds the number of maximal orthogonal families enumerated.
AxiomReport check_axioms(const FiniteInverseMonoid& monoid, std::size_t family_guard = 1000000);

/// Supports of the minimal nonzero idempotents of S, in canonical order.
std::vector<AtomSet> idempotent_atoms(const FiniteInverseMonoid& monoid);

/// The action of S on the atoms of E(S) (s acts by e -> s e s†), as a monoid on
/// those atoms. Injective exactly when S is fundamental. Requires axiom (a).
FiniteInverseMonoid rebase_on_idempotent_atoms(const FiniteInverseMonoid& monoid);

/// The partial map beta_s on characters rho of E(S), beta_s(rho)(e) = rho(s† e s),
/// realized on the character index set. For a monoid whose idempotent atoms
/// are the singletons this equals s itself (asserted).
PartialBijection beta(const FiniteInverseMonoid& monoid, const PartialBijection& s);

/// Refines nonzero s_1..s_N into pairwise meet-orthogonal pieces by the
/// inductive splitting b -> {b ∧ s_N, b \ (b ∧ s_N)}. Output in canonical order.
/// Throws DomainError on an empty list or a zero input.
std::vector<PartialBijection> chop(std::span<const PartialBijection> inputs);

/// Checks properties (a)-(d) of a chop output; returns an empty string on
/// success, otherwise a description of the first violation.
std::string verify_chop(std::span<const PartialBijection> inputs, std::span<const PartialBijection> output);

/// R = union of graphs of the elements of S, as an equivalence relation on atoms.
class GroupoidRelation {
 public:
  GroupoidRelation(int atom_count, std::vector<AtomSet> rows);

  int atom_count() const { return n_; }
  /// (x, y) in R, i.e. some s in S maps y to x.
  bool contains(int x, int y) const { return rows_[static_cast<std::size_t>(x)].contains(y); }
  const AtomSet& row(int x) const { return rows_[static_cast<std::size_t>(x)]; }
  std::size_t size() const;
  /// Equivalence classes, ordered by least atom.
  std::vector<AtomSet> blocks() const;
  bool operator==(const GroupoidRelation&) const = default;

 private:
  int n_;
  std::vector<AtomSet> rows_;
};

/// Throws InvariantViolation if the union of graphs is not an equivalence relation.
GroupoidRelation groupoid_relation(const FiniteInverseMonoid& monoid);

}  // namespace cartanlab
