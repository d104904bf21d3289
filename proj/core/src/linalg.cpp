#include "cartanlab/linalg.hpp"

#include <cmath>
#include <numbers>

#include "cartanlab/phased.hpp"

namespace cartanlab {

Complex root_of_unity(int p, int k) {
  const int r = mod(p, k);
  if ((4 * r) % k == 0) {
    static const Complex quarter[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return quarter[(4 * r) / k];
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * r / k);
}

double max_deviation(const Matrix& a, const Matrix& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

OperatorSpace OperatorSpace::span(Eigen::Index ambient_dim, std::span<const Matrix> matrices, double tol) {
  OperatorSpace out(ambient_dim, tol);
  for (const auto& m : matrices) out.add(m);
  return out;
}

bool OperatorSpace::add(const Matrix& m) {
  const double norm = m.norm();
  if (norm <= tol_) return false;
  Matrix r = m;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis_) r -= b * (b.conjugate().cwiseProduct(r)).sum();
  const double rn = r.norm();
  if (rn <= tol_ * std::max(1.0, norm)) return false;
  basis_.push_back(r / rn);
  return true;
}

Matrix OperatorSpace::project(const Matrix& m) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& b : basis_) out += b * (b.conjugate().cwiseProduct(m)).sum();
  return out;
}

bool OperatorSpace::contains(const Matrix& m) const {
  return (m - project(m)).norm() <= tol_ * std::max(1.0, m.norm()) * 10.0;
}

bool OperatorSpace::contains(const OperatorSpace& other) const {
  for (const auto& b : other.basis_)
    if (!contains(b)) return false;
  return true;
}

OperatorSpace OperatorSpace::sum(const OperatorSpace& other) const {
  OperatorSpace out = *this;
  for (const auto& b : other.basis_) out.add(b);
  return out;
}

OperatorSpace OperatorSpace::intersect(const OperatorSpace& other) const {
  OperatorSpace out(dim_, tol_);
  if (basis_.empty() || other.basis_.empty()) return out;
  const Matrix a = as_columns();
  const Matrix b = other.as_columns();
  Matrix stacked(a.rows(), a.cols() + b.cols());
  stacked << a, -b;
  const Matrix kernel = null_space(stacked, tol_);
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    const Vector flat = a * kernel.col(c).head(a.cols());
    out.add(Eigen::Map<const Matrix>(flat.data(), dim_, dim_));
  }
  return out;
}

OperatorSpace OperatorSpace::adjoint() const {
  OperatorSpace out(dim_, tol_);
  for (const auto& b : basis_) out.add(b.adjoint());
  return out;
}

bool OperatorSpace::closed_under_product() const {
  for (const auto& a : basis_)
    for (const auto& b : basis_)
      if (!contains(Matrix(a * b))) return false;
  return true;
}

bool OperatorSpace::closed_under_adjoint() const {
  for (const auto& a : basis_)
    if (!contains(Matrix(a.adjoint()))) return false;
  return true;
}

bool OperatorSpace::contains_identity() const { return contains(Matrix(Matrix::Identity(dim_, dim_))); }

Matrix OperatorSpace::as_columns() const {
  Matrix out(dim_ * dim_, static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(basis_[i].data(), dim_ * dim_);
  return out;
}

Matrix null_space(const Matrix& a, double tol) {
  if (a.cols() == 0) return Matrix(0, 0);
  // Pad with zero rows so that V is square even for wide inputs.
  Matrix padded = Matrix::Zero(std::max(a.rows(), a.cols()), a.cols());
  padded.topRows(a.rows()) = a;
  Eigen::JacobiSVD<Matrix> svd(padded, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

}  // namespace cartanlab
