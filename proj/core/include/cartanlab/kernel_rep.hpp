#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cartanlab/boolean_monoid.hpp"
#include "cartanlab/extension.hpp"
#include "cartanlab/linalg.hpp"

namespace cartanlab {

/// K(t, s): the support of j(s†t ∧ 1). Asserted equal to the source of j(s ∧ t).
AtomSet kernel(const Extension& ext, const Section& j, std::size_t t, std::size_t s);

/// The column k_s as the function t -> K(t, s) over the canonical index of S.
std::vector<AtomSet> kernel_column(const Extension& ext, const Section& j, std::size_t s);

/// T(rho) with entries rho(K(s_j, s_i)) for the atom rho.
Eigen::MatrixXd kernel_atom_matrix(const Extension& ext, const Section& j, std::span<const std::size_t> s_list,
                                   int atom);

struct KernelPsdReport {
  std::size_t atoms_checked = 0;
  double min_eigenvalue = 0.0;
  /// Largest number of rank-one blocks in any T(rho).
  std::size_t max_classes = 0;
};

/// For every atom: the relation {(i, j) : rho(K(s_i, s_j)) = 1} is symmetric and
/// transitive, T(rho) is the sum of class indicator outer products, and its least
/// eigenvalue is at least -tol. Throws InvariantViolation otherwise.
KernelPsdReport kernel_psd_check(const Extension& ext, const Section& j, std::span<const std::size_t> s_list,
                                 double tol = kDefaultTolerance);

/// Row-major basis of l2(R): pairs (x, y) with x ~ y.
class RBasis {
 public:
  explicit RBasis(const GroupoidRelation& relation);

  int atom_count() const { return n_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(pairs_.size()); }
  std::pair<int, int> pair(Eigen::Index i) const { return pairs_[static_cast<std::size_t>(i)]; }
  std::optional<Eigen::Index> index(int x, int y) const;
  Eigen::Index require_index(int x, int y) const;
  /// Indices of the diagonal pairs (y, y), by y.
  std::vector<Eigen::Index> diagonal() const;

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<Eigen::Index> lookup_;
};

/// lambda_pi(v): delta_(x,y) -> omega^sigma(v, y->x)(y) delta_(q(v)(x), y), or 0
/// when x is outside dom q(v).
Matrix lambda_matrix(const Extension& ext, const Section& j, const RBasis& basis, const PhasedElement& v);

/// Multiplication by f(x) on delta_(x,y): the image of D in M_q.
Matrix diagonal_operator(const RBasis& basis, std::span<const Complex> values);

struct ProjectionData {
  /// Orthogonal projection onto span{delta_(y,y)}.
  Matrix p;
  /// Isometry e_y -> delta_(y,y), |R| x n.
  Matrix v;
  /// max over v in G of |P lambda(v) P - lambda(Delta(v)) P|.
  double compression_error = 0.0;
  /// |V V* - P| and |V* V - I|.
  double range_error = 0.0;
  double isometry_error = 0.0;
};

/// Builds P and V and measures both identities over `elements`.
ProjectionData projection_P_and_V(const Extension& ext, const Section& j, const RBasis& basis,
                                  std::span<const PhasedElement> elements);

/// E(T): multiplication by x -> T_((x,x),(x,x)).
Matrix expectation(const RBasis& basis, const Matrix& t);

struct GramReport {
  std::size_t vectors = 0;
  std::size_t rank = 0;
  /// max |<k_s ⊗ e_x, k_t ⊗ e_y> - <F_s,x, F_t,y>|.
  double isometry_error = 0.0;
  /// max |U lambda(v)(k_s ⊗ e_y) - lambda_matrix(v) F_s,y|.
  double intertwining_error = 0.0;
  /// k_se = k_s j(e) for all s and idempotents e.
  bool reproducing = true;
  /// k_r k_s = k_(r ∧ s) pointwise.
  bool meet_rep = true;
};

/// Gram matrix of the vectors k_s ⊗ e_x, its rank, and the transport to l2(R).
/// Throws InvariantViolation if the rank differs from |R| or an error exceeds tol.
GramReport abstract_gram_check(const Extension& ext, const Section& j, const RBasis& basis,
                               std::span<const PhasedElement> elements, double tol = kDefaultTolerance);

/// Header "atoms=<n> k=<k> dim=<|R|>" then "row,col,re,im" per nonzero entry.
std::string dump_matrix(const RBasis& basis, int k, const Matrix& m);

}  // namespace cartanlab
