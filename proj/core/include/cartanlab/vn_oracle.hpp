#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cartanlab/kernel_rep.hpp"
#include "cartanlab/linalg.hpp"
#include "cartanlab/report.hpp"

namespace cartanlab {

/// An extension with its section, l2(R) basis and the matrices lambda_pi(v)
/// for every v in G and lambda_pi(j(s)) for every s in S.
struct CartanModel {
  Extension ext;
  Section j;
  GroupoidRelation relation;
  RBasis basis;
  std::vector<PhasedElement> g;
  std::vector<Matrix> lambda_g;
  std::vector<Matrix> lambda_j;
  /// M_q = span lambda_pi(G) and D_q = span lambda_pi(P).
  OperatorSpace m_q;
  OperatorSpace d_q;
  double tol;

  /// Throws SizeGuardError when |G| exceeds `guard`.
  static CartanModel build(const Extension& ext, double tol = kDefaultTolerance, std::size_t guard = 1000000);
};

struct RepresentationReport {
  std::size_t pairs = 0;
  /// max |lambda(v) lambda(w) - lambda(vw)| over all of G x G.
  double product_error = 0.0;
  /// max |lambda(v)* - lambda(v†)|.
  double dagger_error = 0.0;
  /// max |T T* T - T|.
  double isometry_error = 0.0;
  bool injective = false;
  bool pass = false;
};

/// Exhaustive homomorphism, dagger, injectivity and partial isometry checks.
RepresentationReport representation_check(const CartanModel& model);

struct AlgebraSpan {
  OperatorSpace space;
  bool product_closed = false;
  bool adjoint_closed = false;
  bool unital = false;
};

AlgebraSpan span_basis(Eigen::Index ambient_dim, std::span<const Matrix> matrices, double tol = kDefaultTolerance);

/// Elements of `within` commuting with every element of `with`.
OperatorSpace relative_commutant(const OperatorSpace& within, const OperatorSpace& with);

struct MasaReport {
  std::size_t d_dim = 0;
  std::size_t relative_commutant_dim = 0;
  std::size_t center_dim = 0;
  bool abelian = false;
  bool masa = false;
};

/// Throws DomainError when D is not contained in M.
MasaReport masa_check(const OperatorSpace& m, const OperatorSpace& d);

struct ExpectationReport {
  /// max over G of |E(lambda(v)) - lambda(Delta(v))|.
  double delta_error = 0.0;
  double idempotent_error = 0.0;
  double unital_error = 0.0;
  /// max |E(x) - proj_D(E(x))| over the basis of M: E lands in D_q.
  double range_error = 0.0;
  /// max |E(d x d') - d E(x) d'| and |E(u* x u) - u* E(x) u| for u in lambda(G).
  double bimodule_error = 0.0;
  /// Least diagonal value of E(x* x) over random samples of M.
  double min_positive_value = 0.0;
  /// Least eigenvalue of H_ab = tr E(b_a* b_b) over an orthonormal basis of M.
  double faithful_eigenvalue = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

ExpectationReport expectation_properties(const CartanModel& model, std::uint64_t seed = 1, std::size_t samples = 100);

struct RecoveredExtension {
  /// S' on the minimal projections of D.
  FiniteInverseMonoid monoid;
  /// Diagonal support of each minimal projection of D.
  std::vector<std::vector<Eigen::Index>> projections;
  /// Pairs (b, a) with Q_b M Q_a != 0.
  std::vector<std::pair<int, int>> relation;
  std::size_t candidates = 0;
};

/// Recovers S' as the graphs of D-normalizing partial isometries in M.
/// Requires D diagonal in the ambient basis. Throws SizeGuardError when more
/// than `guard` candidate graphs arise.
RecoveredExtension recover_extension(const OperatorSpace& m, const OperatorSpace& d, std::size_t guard = 100000,
                                     std::uint64_t seed = 7);

/// Atom permutation pi with pi a pi^-1 = b as sets, searched in lexicographic
/// order. Throws SizeGuardError when atoms > `max_atoms`.
std::optional<std::vector<int>> isomorphism_by_atoms(const FiniteInverseMonoid& a, const FiniteInverseMonoid& b,
                                                     int max_atoms = 8);

/// Dimensions, algebra closure, MASA, expectation, normalizers and recovery.
Report cartan_report(const CartanModel& model);

}  // namespace cartanlab
