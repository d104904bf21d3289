#include "cartanlab/kernel_rep.hpp"

#include <algorithm>
#include <cstdio>

#include "cartanlab/errors.hpp"

namespace cartanlab {

namespace {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drops the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

AtomSet kernel(const Extension& ext, const Section& j, std::size_t t, std::size_t s) {
  const auto& base = ext.base();
  const auto fixed = meet(compose(dagger(base[s]), base[t]), PartialBijection::identity(base.atom_count()));
  const auto& value = j[base.require_index(fixed)];
  if (!value.is_phased_idempotent() || std::any_of(value.phase.begin(), value.phase.end(), [](int p) { return p != 0; }))
    throw InvariantViolation("K(t, s) is not a projection for (" + base[t].to_string() + ", " + base[s].to_string() + ")");
  const AtomSet support = value.bijection.domain();
  if (support != meet(base[s], base[t]).domain())
    throw InvariantViolation("K(t, s) differs from the source of s ∧ t");
  return support;
}

std::vector<AtomSet> kernel_column(const Extension& ext, const Section& j, std::size_t s) {
  std::vector<AtomSet> out;
  out.reserve(ext.base().size());
  for (std::size_t t = 0; t < ext.base().size(); ++t) out.push_back(kernel(ext, j, t, s));
  return out;
}

Eigen::MatrixXd kernel_atom_matrix(const Extension& ext, const Section& j, std::span<const std::size_t> s_list,
                                   int atom) {
  const auto size = static_cast<Eigen::Index>(s_list.size());
  Eigen::MatrixXd t(size, size);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index c = 0; c < size; ++c)
      t(i, c) = kernel(ext, j, s_list[static_cast<std::size_t>(c)], s_list[static_cast<std::size_t>(i)]).contains(atom)
                    ? 1.0
                    : 0.0;
  return t;
}

KernelPsdReport kernel_psd_check(const Extension& ext, const Section& j, std::span<const std::size_t> s_list,
                                 double tol) {
  KernelPsdReport report;
  report.min_eigenvalue = 0.0;
  const auto size = static_cast<Eigen::Index>(s_list.size());
  for (int atom = 0; atom < ext.atom_count(); ++atom) {
    const Eigen::MatrixXd t = kernel_atom_matrix(ext, j, s_list, atom);
    for (Eigen::Index a = 0; a < size; ++a)
      for (Eigen::Index b = 0; b < size; ++b) {
        if (t(a, b) != t(b, a)) throw InvariantViolation("T(rho) is not symmetric at atom " + std::to_string(atom));
        if (t(a, b) == 0.0) continue;
        if (t(a, a) == 0.0) throw InvariantViolation("T(rho) has support off its diagonal support");
        for (Eigen::Index c = 0; c < size; ++c)
          if (t(b, c) != 0.0 && t(a, c) == 0.0)
            throw InvariantViolation("relation R_rho is not transitive at atom " + std::to_string(atom));
      }

    Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(size, size);
    std::vector<bool> seen(static_cast<std::size_t>(size), false);
    std::size_t classes = 0;
    for (Eigen::Index a = 0; a < size; ++a) {
      if (seen[static_cast<std::size_t>(a)] || t(a, a) == 0.0) continue;
      Eigen::VectorXd zeta = Eigen::VectorXd::Zero(size);
      for (Eigen::Index b = 0; b < size; ++b)
        if (t(a, b) != 0.0) {
          zeta(b) = 1.0;
          seen[static_cast<std::size_t>(b)] = true;
        }
      rebuilt += zeta * zeta.transpose();
      ++classes;
    }
    if (rebuilt != t) throw InvariantViolation("T(rho) is not the sum of its class projections at atom " + std::to_string(atom));

    if (size > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t, Eigen::EigenvaluesOnly);
      const double least = solver.eigenvalues().minCoeff();
      if (least < -tol)
        throw InvariantViolation("T(rho) has eigenvalue " + format_number(least) + " at atom " + std::to_string(atom));
      report.min_eigenvalue = report.atoms_checked == 0 ? least : std::min(report.min_eigenvalue, least);
    }
    report.max_classes = std::max(report.max_classes, classes);
    ++report.atoms_checked;
  }
  return report;
}

RBasis::RBasis(const GroupoidRelation& relation) : n_(relation.atom_count()) {
  lookup_.assign(static_cast<std::size_t>(n_ * n_), -1);
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y)
      if (relation.contains(x, y)) {
        lookup_[static_cast<std::size_t>(x * n_ + y)] = static_cast<Eigen::Index>(pairs_.size());
        pairs_.emplace_back(x, y);
      }
}

std::optional<Eigen::Index> RBasis::index(int x, int y) const {
  if (x < 0 || y < 0 || x >= n_ || y >= n_) return std::nullopt;
  const Eigen::Index i = lookup_[static_cast<std::size_t>(x * n_ + y)];
  if (i < 0) return std::nullopt;
  return i;
}

Eigen::Index RBasis::require_index(int x, int y) const {
  auto i = index(x, y);
  if (!i) throw DomainError("(" + std::to_string(x) + "," + std::to_string(y) + ") is not in R");
  return *i;
}

std::vector<Eigen::Index> RBasis::diagonal() const {
  std::vector<Eigen::Index> out;
  for (int y = 0; y < n_; ++y) out.push_back(require_index(y, y));
  return out;
}

Matrix lambda_matrix(const Extension& ext, const Section& j, const RBasis& basis, const PhasedElement& v) {
  const auto& base = ext.base();
  const int n = base.atom_count();
  Matrix out = Matrix::Zero(basis.size(), basis.size());
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    const auto [x, y] = basis.pair(col);
    if (!v.bijection.domain().contains(x)) continue;
    const std::size_t s = base.require_index(PartialBijection::singleton(n, y, x));
    const PhasedElement phase = sigma(ext, j, v, s);
    out(basis.require_index(v.bijection(x), y), col) = root_of_unity(phase.phase[static_cast<std::size_t>(y)], ext.k());
  }
  return out;
}

Matrix diagonal_operator(const RBasis& basis, std::span<const Complex> values) {
  Matrix out = Matrix::Zero(basis.size(), basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) out(i, i) = values[static_cast<std::size_t>(basis.pair(i).first)];
  return out;
}

ProjectionData projection_P_and_V(const Extension& ext, const Section& j, const RBasis& basis,
                                  std::span<const PhasedElement> elements) {
  const int n = basis.atom_count();
  ProjectionData out;
  out.p = Matrix::Zero(basis.size(), basis.size());
  out.v = Matrix::Zero(basis.size(), n);
  const auto diag = basis.diagonal();
  for (int y = 0; y < n; ++y) {
    out.p(diag[static_cast<std::size_t>(y)], diag[static_cast<std::size_t>(y)]) = 1.0;
    out.v(diag[static_cast<std::size_t>(y)], y) = 1.0;
  }
  out.range_error = max_deviation(out.v * out.v.adjoint(), out.p);
  out.isometry_error = max_deviation(out.v.adjoint() * out.v, Matrix::Identity(n, n));
  for (const auto& v : elements) {
    const Matrix lv = lambda_matrix(ext, j, basis, v);
    const Matrix ld = lambda_matrix(ext, j, basis, delta(ext, j, v));
    out.compression_error = std::max(out.compression_error, max_deviation(out.p * lv * out.p, ld * out.p));
  }
  return out;
}

Matrix expectation(const RBasis& basis, const Matrix& t) {
  const auto diag = basis.diagonal();
  std::vector<Complex> values;
  for (Eigen::Index d : diag) values.push_back(t(d, d));
  return diagonal_operator(basis, values);
}

GramReport abstract_gram_check(const Extension& ext, const Section& j, const RBasis& basis,
                               std::span<const PhasedElement> elements, double tol) {
  const auto& base = ext.base();
  const int n = base.atom_count();
  const std::size_t m = base.size();
  GramReport report;
  report.vectors = m * static_cast<std::size_t>(n);

  std::vector<std::vector<AtomSet>> columns;
  for (std::size_t s = 0; s < m; ++s) columns.push_back(kernel_column(ext, j, s));

  // F_{s,y} = delta_(s(y), y) when y is in dom s.
  auto f_vector = [&](std::size_t s, int y) {
    Vector f = Vector::Zero(basis.size());
    if (base[s].domain().contains(y)) f(basis.require_index(base[s](y), y)) = 1.0;
    return f;
  };

  const auto count = static_cast<Eigen::Index>(report.vectors);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(count, count);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t)
      for (int x = 0; x < n; ++x) {
        const double value = columns[s][t].contains(x) ? 1.0 : 0.0;
        gram(static_cast<Eigen::Index>(s) * n + x, static_cast<Eigen::Index>(t) * n + x) = value;
        const double transported = f_vector(s, x).dot(f_vector(t, x)).real();
        report.isometry_error = std::max(report.isometry_error, std::abs(value - transported));
      }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()(i) > tol) ++report.rank;

  for (const auto& v : elements) {
    const Matrix lv = lambda_matrix(ext, j, basis, v);
    const std::size_t qv = base.require_index(v.bijection);
    for (std::size_t s = 0; s < m; ++s) {
      const std::size_t qs = base.product(qv, s);
      const PhasedElement sig = sigma(ext, j, v, s);
      for (int y = 0; y < n; ++y) {
        Vector lhs = f_vector(qs, y);
        if (base[qs].domain().contains(y)) lhs *= root_of_unity(sig.phase[static_cast<std::size_t>(y)], ext.k());
        const Vector rhs = lv * f_vector(s, y);
        report.intertwining_error = std::max(report.intertwining_error, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    }
  }

  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t e : base.idempotents()) {
      const std::size_t se = base.product(s, e);
      for (std::size_t t = 0; t < m; ++t)
        if (columns[se][t] != (columns[s][t] & base[e].domain())) report.reproducing = false;
    }
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s) {
      const std::size_t rs = base.require_index(meet(base[r], base[s]));
      for (std::size_t t = 0; t < m; ++t)
        if ((columns[r][t] & columns[s][t]) != columns[rs][t]) report.meet_rep = false;
    }

  if (report.rank != static_cast<std::size_t>(basis.size()))
    throw InvariantViolation("Gram rank " + std::to_string(report.rank) + " differs from |R| = " +
                             std::to_string(basis.size()));
  if (report.isometry_error > tol || report.intertwining_error > tol)
    throw InvariantViolation("transport to l2(R) is not an intertwining isometry");
  if (!report.reproducing || !report.meet_rep) throw InvariantViolation("kernel columns violate k_se = k_s j(e) or k_r k_s = k_(r∧s)");
  return report;
}

std::string dump_matrix(const RBasis& basis, int k, const Matrix& m) {
  std::string out = "atoms=" + std::to_string(basis.atom_count()) + " k=" + std::to_string(k) +
                    " dim=" + std::to_string(basis.size()) + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      if (z == Complex(0.0, 0.0)) continue;
      out += std::to_string(r) + "," + std::to_string(c) + "," + format_number(z.real()) + "," +
             format_number(z.imag()) + "\n";
    }
  return out;
}

}  // namespace cartanlab
