#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cartanlab/vn_oracle.hpp"

namespace cartanlab {

/// A subset of S, indexed by the canonical element order.
using ElementSet = std::vector<bool>;

ElementSet element_set(const FiniteInverseMonoid& s, std::span<const PartialBijection> members);
std::vector<PartialBijection> members(const FiniteInverseMonoid& s, const ElementSet& a);
std::string describe(const FiniteInverseMonoid& s, const ElementSet& a);
ElementSet set_union(const ElementSet& a, const ElementSet& b);
ElementSet set_intersection(const ElementSet& a, const ElementSet& b);
/// {s† : s in A}.
ElementSet set_dagger(const FiniteInverseMonoid& s, const ElementSet& a);
ElementSet idempotent_set(const FiniteInverseMonoid& s);
ElementSet whole_set(const FiniteInverseMonoid& s);

/// Contains 0, downward closed, closed under joins of orthogonal pairs.
bool is_spectral_set(const FiniteInverseMonoid& s, const ElementSet& a);
/// Least spectral set containing `gen`.
ElementSet spectral_closure(const FiniteInverseMonoid& s, const ElementSet& gen);
/// A1 ⋎ A2 as the closure of the union, checked against the set of joins
/// s1 ∨ s2 of orthogonal s1 in A1, s2 in A2. Throws InvariantViolation when
/// the two computations disagree.
ElementSet join_span(const FiniteInverseMonoid& s, const ElementSet& a1, const ElementSet& a2);

/// All spectral sets, one per subset of the minimal nonzero elements, in
/// canonical order. Throws SizeGuardError when there are more than `guard`
/// minimal nonzero elements.
std::vector<ElementSet> enumerate_spectral_sets(const FiniteInverseMonoid& s, std::size_t guard = 25);

/// Ψ(A) = span lambda(j(A)).
OperatorSpace psi(const CartanModel& model, const ElementSet& a);
/// Θ(B) = {s : lambda(j(s)) in B}, checked against q(GN(B, D)).
/// Throws DomainError when B is not a D-bimodule inside M_q.
ElementSet theta(const CartanModel& model, const OperatorSpace& b);
/// q(GN(B, D)): graphs of D-normalizing partial isometries in B.
ElementSet theta_normalizers(const CartanModel& model, const OperatorSpace& b);
bool is_bimodule(const CartanModel& model, const OperatorSpace& b);

/// Every D-bimodule of M_q as a sum of nonzero blocks Q_x M Q_y (each one
/// dimensional, asserted). Throws SizeGuardError beyond 2^guard_bits.
std::vector<OperatorSpace> enumerate_bimodules(const CartanModel& model, std::size_t guard_bits = 20);

/// Spectral sets closed under product and dagger that contain E(S).
std::vector<ElementSet> full_submonoids(const FiniteInverseMonoid& s, std::size_t guard = 25);
/// Bimodules that are unital *-subalgebras, i.e. the algebras D ⊆ B ⊆ M_q.
std::vector<OperatorSpace> intermediate_algebras(const CartanModel& model, std::size_t guard_bits = 20);

struct IntermediateReport {
  std::size_t submonoids = 0;
  std::size_t algebras = 0;
  /// Ψ maps the full submonoids bijectively onto the intermediate algebras.
  bool bijective = false;
  /// Every Ψ(T) is a unital self-adjoint algebra containing D_q.
  bool algebras_valid = false;
};

IntermediateReport intermediate_algebra_check(const CartanModel& model, std::size_t guard = 25);

/// Spectral sets closed under product that contain E(S).
std::vector<ElementSet> spectral_monoids(const FiniteInverseMonoid& s, std::size_t guard = 25);
/// Spectral monoids A with A ⋎ A† = S.
std::vector<ElementSet> msd(const FiniteInverseMonoid& s, std::size_t guard = 25);
/// Members of msd with A ∩ A† = E(S).
std::vector<ElementSet> mtr(const FiniteInverseMonoid& s, std::size_t guard = 25);

struct SubdiagonalReport {
  std::size_t dim_a = 0;
  std::size_t dim_n = 0;
  /// max |Φ_N(xy) - Φ_N(x) Φ_N(y)| over a basis of Ψ(A).
  double multiplicative_error = 0.0;
  /// max |Φ_N(n x n') - n Φ_N(x) n'| over bases of N and M_q.
  double bimodule_error = 0.0;
  bool algebra = false;
  /// Ψ(A) + Ψ(A)* = M_q.
  bool spans = false;
  /// No strictly larger enumerated spectral monoid yields a subdiagonal
  /// algebra with the same N.
  bool maximal = false;
  bool pass = false;
};

SubdiagonalReport verify_subdiagonal(const CartanModel& model, const ElementSet& a, std::size_t guard = 25);

}  // namespace cartanlab
