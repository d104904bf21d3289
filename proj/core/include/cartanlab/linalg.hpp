#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cartanlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTolerance = 1e-9;

/// omega^p for omega = exp(2 pi i / k); exact for quarter turns.
Complex root_of_unity(int p, int k);

/// Largest entry modulus of a - b.
double max_deviation(const Matrix& a, const Matrix& b);

/// A linear subspace of d x d complex matrices, kept as an orthonormal basis
/// for the Hilbert-Schmidt inner product tr(a* b).
class OperatorSpace {
 public:
  explicit OperatorSpace(Eigen::Index ambient_dim, double tol = kDefaultTolerance) : dim_(ambient_dim), tol_(tol) {}

  static OperatorSpace span(Eigen::Index ambient_dim, std::span<const Matrix> matrices,
                            double tol = kDefaultTolerance);

  /// Gram-Schmidt step (run twice for stability); true if the dimension grew.
  bool add(const Matrix& m);

  Eigen::Index ambient_dim() const { return dim_; }
  double tolerance() const { return tol_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Matrix>& basis() const { return basis_; }

  /// Orthogonal projection in the Hilbert-Schmidt inner product.
  Matrix project(const Matrix& m) const;
  bool contains(const Matrix& m) const;
  bool contains(const OperatorSpace& other) const;
  bool same_as(const OperatorSpace& other) const { return dimension() == other.dimension() && contains(other); }

  OperatorSpace sum(const OperatorSpace& other) const;
  OperatorSpace intersect(const OperatorSpace& other) const;
  OperatorSpace adjoint() const;

  bool closed_under_product() const;
  bool closed_under_adjoint() const;
  bool contains_identity() const;

  /// Basis matrices flattened column-major into the columns of one matrix.
  Matrix as_columns() const;

 private:
  Eigen::Index dim_;
  double tol_;
  std::vector<Matrix> basis_;
};

/// Orthonormal basis of the null space of `a` (columns), singular values <= tol.
Matrix null_space(const Matrix& a, double tol = kDefaultTolerance);

}  // namespace cartanlab
