#include "cartanlab/vn_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "cartanlab/errors.hpp"

namespace cartanlab {

namespace {

Matrix random_element(const OperatorSpace& space, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix x = Matrix::Zero(space.ambient_dim(), space.ambient_dim());
  for (const auto& b : space.basis()) x += Complex(normal(rng), normal(rng)) * b;
  return x;
}

Matrix unflatten(const Vector& flat, Eigen::Index dim) { return Eigen::Map<const Matrix>(flat.data(), dim, dim); }

OperatorSpace full_matrix_algebra(Eigen::Index dim, double tol) {
  OperatorSpace out(dim, tol);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      Matrix e = Matrix::Zero(dim, dim);
      e(r, c) = 1.0;
      out.add(e);
    }
  return out;
}

void partial_injections(std::size_t atom, const std::vector<std::vector<bool>>& allowed, std::vector<bool>& used,
                        std::vector<int>& image, std::vector<std::vector<int>>& out, std::size_t guard) {
  if (atom == allowed.size()) {
    if (out.size() >= guard) throw SizeGuardError("more than " + std::to_string(guard) + " candidate graphs");
    out.push_back(image);
    return;
  }
  image[atom] = PartialBijection::kUndefined;
  partial_injections(atom + 1, allowed, used, image, out, guard);
  for (std::size_t b = 0; b < allowed.size(); ++b) {
    if (used[b] || !allowed[b][atom]) continue;
    used[b] = true;
    image[atom] = static_cast<int>(b);
    partial_injections(atom + 1, allowed, used, image, out, guard);
    used[b] = false;
  }
  image[atom] = PartialBijection::kUndefined;
}

}  // namespace

CartanModel CartanModel::build(const Extension& ext, double tol, std::size_t guard) {
  auto j = order_preserving_section(ext);
  auto relation = groupoid_relation(ext.base());
  RBasis basis(relation);
  auto g = ext.elements(guard);
  const Eigen::Index dim = basis.size();
  CartanModel model{ext, j, relation, basis, g, {}, {}, OperatorSpace(dim, tol), OperatorSpace(dim, tol), tol};
  model.lambda_g.reserve(g.size());
  for (const auto& v : g) {
    model.lambda_g.push_back(lambda_matrix(ext, j, basis, v));
    model.m_q.add(model.lambda_g.back());
    if (v.is_phased_idempotent()) model.d_q.add(model.lambda_g.back());
  }
  for (std::size_t s = 0; s < ext.base().size(); ++s) model.lambda_j.push_back(lambda_matrix(ext, j, basis, j[s]));
  return model;
}

RepresentationReport representation_check(const CartanModel& model) {
  RepresentationReport out;
  const auto& g = model.g;
  auto index = [&](const PhasedElement& v) {
    const auto it = std::lower_bound(g.begin(), g.end(), v);
    if (it == g.end() || *it != v) throw InvariantViolation("product left G: " + v.to_string());
    return static_cast<std::size_t>(it - g.begin());
  };
  for (std::size_t a = 0; a < g.size(); ++a) {
    const Matrix& la = model.lambda_g[a];
    out.dagger_error = std::max(out.dagger_error, max_deviation(la.adjoint(), model.lambda_g[index(model.ext.dagger(g[a]))]));
    out.isometry_error = std::max(out.isometry_error, max_deviation(la * la.adjoint() * la, la));
    for (std::size_t b = 0; b < g.size(); ++b) {
      const Matrix& product = model.lambda_g[index(model.ext.multiply(g[a], g[b]))];
      out.product_error = std::max(out.product_error, max_deviation(la * model.lambda_g[b], product));
      ++out.pairs;
    }
  }
  out.injective = true;
  for (std::size_t a = 0; a < g.size() && out.injective; ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      if (max_deviation(model.lambda_g[a], model.lambda_g[b]) <= 0.5) {
        out.injective = false;
        break;
      }
  out.pass = out.injective && out.product_error <= model.tol && out.dagger_error <= model.tol &&
             out.isometry_error <= model.tol;
  return out;
}

AlgebraSpan span_basis(Eigen::Index ambient_dim, std::span<const Matrix> matrices, double tol) {
  AlgebraSpan out{OperatorSpace::span(ambient_dim, matrices, tol)};
  out.product_closed = out.space.closed_under_product();
  out.adjoint_closed = out.space.closed_under_adjoint();
  out.unital = out.space.contains_identity();
  return out;
}

OperatorSpace relative_commutant(const OperatorSpace& within, const OperatorSpace& with) {
  const Eigen::Index dim = within.ambient_dim();
  const auto cols = static_cast<Eigen::Index>(within.dimension());
  OperatorSpace out(dim, within.tolerance());
  if (cols == 0) return out;
  const Eigen::Index block = dim * dim;
  Matrix constraints(block * static_cast<Eigen::Index>(std::max<std::size_t>(with.dimension(), 1)), cols);
  constraints.setZero();
  for (std::size_t k = 0; k < with.dimension(); ++k) {
    const Matrix& d = with.basis()[k];
    for (Eigen::Index i = 0; i < cols; ++i) {
      const Matrix& x = within.basis()[static_cast<std::size_t>(i)];
      const Matrix comm = x * d - d * x;
      constraints.block(static_cast<Eigen::Index>(k) * block, i, block, 1) = Eigen::Map<const Vector>(comm.data(), block);
    }
  }
  const Matrix kernel = null_space(constraints, within.tolerance());
  const Matrix basis = within.as_columns();
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) out.add(unflatten(basis * kernel.col(c), dim));
  return out;
}

MasaReport masa_check(const OperatorSpace& m, const OperatorSpace& d) {
  if (!m.contains(d)) throw DomainError("D is not contained in M");
  MasaReport report;
  report.d_dim = d.dimension();
  report.relative_commutant_dim = relative_commutant(m, d).dimension();
  report.center_dim = relative_commutant(m, m).dimension();
  report.abelian = relative_commutant(d, d).dimension() == d.dimension();
  report.masa = report.abelian && report.relative_commutant_dim == report.d_dim;
  return report;
}

ExpectationReport expectation_properties(const CartanModel& model, std::uint64_t seed, std::size_t samples) {
  const auto& basis = model.basis;
  const Eigen::Index dim = basis.size();
  const double tol = model.tol;
  ExpectationReport report;

  for (std::size_t i = 0; i < model.g.size(); ++i) {
    const Matrix ld = lambda_matrix(model.ext, model.j, basis, delta(model.ext, model.j, model.g[i]));
    report.delta_error = std::max(report.delta_error, max_deviation(expectation(basis, model.lambda_g[i]), ld));
  }

  report.unital_error = max_deviation(expectation(basis, Matrix::Identity(dim, dim)), Matrix::Identity(dim, dim));
  const auto& mb = model.m_q.basis();
  const auto& db = model.d_q.basis();
  for (const auto& x : mb) {
    const Matrix ex = expectation(basis, x);
    report.idempotent_error = std::max(report.idempotent_error, max_deviation(expectation(basis, ex), ex));
    report.range_error = std::max(report.range_error, max_deviation(model.d_q.project(ex), ex));
    for (const auto& d1 : db)
      for (const auto& d2 : db)
        report.bimodule_error =
            std::max(report.bimodule_error, max_deviation(expectation(basis, d1 * x * d2), d1 * ex * d2));
    for (const auto& u : model.lambda_g)
      report.bimodule_error = std::max(
          report.bimodule_error, max_deviation(expectation(basis, u.adjoint() * x * u), u.adjoint() * ex * u));
  }

  std::mt19937_64 rng(seed);
  report.samples = samples;
  report.min_positive_value = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Matrix x = random_element(model.m_q, rng);
    const Matrix e = expectation(basis, x.adjoint() * x);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double value = e(r, r).real();
      report.min_positive_value = i == 0 && r == 0 ? value : std::min(report.min_positive_value, value);
      if (std::abs(e(r, r).imag()) > tol) report.min_positive_value = -1.0;
    }
  }

  const auto size = static_cast<Eigen::Index>(mb.size());
  Matrix h(size, size);
  for (Eigen::Index a = 0; a < size; ++a)
    for (Eigen::Index b = 0; b < size; ++b)
      h(a, b) = expectation(basis, mb[static_cast<std::size_t>(a)].adjoint() * mb[static_cast<std::size_t>(b)]).trace();
  if (size > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    report.faithful_eigenvalue = solver.eigenvalues().minCoeff();
  }

  report.pass = report.delta_error <= tol && report.idempotent_error <= tol && report.unital_error <= tol &&
                report.range_error <= tol && report.bimodule_error <= tol && report.min_positive_value >= -tol &&
                report.faithful_eigenvalue > tol;
  return report;
}

RecoveredExtension recover_extension(const OperatorSpace& m, const OperatorSpace& d, std::size_t guard,
                                     std::uint64_t seed) {
  const Eigen::Index dim = m.ambient_dim();
  const double tol = m.tolerance();
  for (const auto& b : d.basis()) {
    Matrix off = b;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > tol) throw DomainError("D is not diagonal in the ambient basis");
  }

  // Minimal projections of D: indices with identical value signatures.
  std::vector<std::vector<Eigen::Index>> classes;
  std::vector<int> class_of(static_cast<std::size_t>(dim), -1);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (class_of[static_cast<std::size_t>(i)] >= 0) continue;
    const int id = static_cast<int>(classes.size());
    classes.push_back({});
    for (Eigen::Index r = i; r < dim; ++r) {
      if (class_of[static_cast<std::size_t>(r)] >= 0) continue;
      const bool same = std::all_of(d.basis().begin(), d.basis().end(),
                                    [&](const Matrix& b) { return std::abs(b(i, i) - b(r, r)) <= tol; });
      if (same) {
        class_of[static_cast<std::size_t>(r)] = id;
        classes.back().push_back(r);
      }
    }
  }
  const auto atoms = static_cast<int>(classes.size());
  if (atoms > kMaxAtoms) throw SizeGuardError("D has more than 64 minimal projections");
  std::vector<Matrix> q;
  for (const auto& cls : classes) {
    Matrix p = Matrix::Zero(dim, dim);
    for (Eigen::Index i : cls) p(i, i) = 1.0;
    q.push_back(std::move(p));
  }

  RecoveredExtension out{FiniteInverseMonoid::from_elements(1, {}), classes, {}, 0};
  std::vector<std::vector<bool>> allowed(static_cast<std::size_t>(atoms), std::vector<bool>(static_cast<std::size_t>(atoms)));
  for (int b = 0; b < atoms; ++b)
    for (int a = 0; a < atoms; ++a) {
      const bool nonzero = std::any_of(m.basis().begin(), m.basis().end(), [&](const Matrix& x) {
        return (q[static_cast<std::size_t>(b)] * x * q[static_cast<std::size_t>(a)]).cwiseAbs().maxCoeff() > tol;
      });
      allowed[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = nonzero;
      if (nonzero) out.relation.emplace_back(b, a);
    }

  std::vector<std::vector<int>> candidates;
  std::vector<bool> used(static_cast<std::size_t>(atoms), false);
  std::vector<int> image(static_cast<std::size_t>(atoms), PartialBijection::kUndefined);
  partial_injections(0, allowed, used, image, candidates, guard);
  out.candidates = candidates.size();

  std::mt19937_64 rng(seed);
  const Matrix mcols = m.as_columns();
  std::vector<PartialBijection> graphs;
  for (const auto& img : candidates) {
    // Entries outside the block pattern of the graph must vanish.
    std::vector<bool> pattern(static_cast<std::size_t>(dim * dim), false);
    Matrix source = Matrix::Zero(dim, dim);
    for (int a = 0; a < atoms; ++a) {
      const int b = img[static_cast<std::size_t>(a)];
      if (b == PartialBijection::kUndefined) continue;
      source += q[static_cast<std::size_t>(a)];
      for (Eigen::Index r : classes[static_cast<std::size_t>(b)])
        for (Eigen::Index c : classes[static_cast<std::size_t>(a)]) pattern[static_cast<std::size_t>(c * dim + r)] = true;
    }
    std::vector<Eigen::Index> outside;
    for (Eigen::Index e = 0; e < dim * dim; ++e)
      if (!pattern[static_cast<std::size_t>(e)]) outside.push_back(e);
    Matrix constraints(static_cast<Eigen::Index>(outside.size()), mcols.cols());
    for (std::size_t r = 0; r < outside.size(); ++r) constraints.row(static_cast<Eigen::Index>(r)) = mcols.row(outside[r]);
    const Matrix kernel = outside.empty() ? Matrix(Matrix::Identity(mcols.cols(), mcols.cols()))
                                          : null_space(constraints, tol);

    Matrix x = Matrix::Zero(dim, dim);
    std::normal_distribution<double> normal;
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
      x += Complex(normal(rng), normal(rng)) * unflatten(mcols * kernel.col(c), dim);

    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol) ++rank;
    const Matrix v = svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).adjoint();

    bool ok = m.contains(v) && max_deviation(v.adjoint() * v, source) <= tol * 100;
    for (int a = 0; a < atoms && ok; ++a) {
      const int b = img[static_cast<std::size_t>(a)];
      if (b == PartialBijection::kUndefined) continue;
      ok = max_deviation(v * q[static_cast<std::size_t>(a)] * v.adjoint(), q[static_cast<std::size_t>(b)]) <= tol * 100;
    }
    if (ok) graphs.emplace_back(atoms, img);
  }
  out.monoid = FiniteInverseMonoid::from_elements(atoms, std::move(graphs));
  return out;
}

std::optional<std::vector<int>> isomorphism_by_atoms(const FiniteInverseMonoid& a, const FiniteInverseMonoid& b,
                                                     int max_atoms) {
  if (a.atom_count() != b.atom_count() || a.size() != b.size()) return std::nullopt;
  const int n = a.atom_count();
  if (n > max_atoms) throw SizeGuardError("isomorphism search limited to " + std::to_string(max_atoms) + " atoms");
  std::vector<int> pi(static_cast<std::size_t>(n));
  std::iota(pi.begin(), pi.end(), 0);
  do {
    const bool maps = std::all_of(a.elements().begin(), a.elements().end(), [&](const PartialBijection& s) {
      std::vector<int> image(static_cast<std::size_t>(n), PartialBijection::kUndefined);
      for (int y : s.domain().atoms())
        image[static_cast<std::size_t>(pi[static_cast<std::size_t>(y)])] = pi[static_cast<std::size_t>(s(y))];
      return b.contains(PartialBijection(n, std::move(image)));
    });
    if (maps) return pi;
  } while (std::next_permutation(pi.begin(), pi.end()));
  return std::nullopt;
}

Report cartan_report(const CartanModel& model) {
  Report report("cartan");
  const double tol = model.tol;
  const Eigen::Index dim = model.basis.size();
  const auto n = static_cast<std::size_t>(model.ext.atom_count());
  report.add("atoms", static_cast<unsigned long long>(n));
  report.add("k", model.ext.k());
  report.add("monoid_size", static_cast<unsigned long long>(model.ext.base().size()));
  report.add("extension_size", static_cast<unsigned long long>(model.g.size()));
  report.add("relation_size", static_cast<unsigned long long>(dim));
  report.add("dim_M", static_cast<unsigned long long>(model.m_q.dimension()));
  report.add("dim_D", static_cast<unsigned long long>(model.d_q.dimension()));
  report.add("closure_note", "finite dimension: norm, weak-* and Bures closures of subspaces coincide");
  report.check("dim_M_equals_R", model.m_q.dimension() == static_cast<std::size_t>(dim));
  report.check("dim_D_equals_X", model.d_q.dimension() == n);

  report.check("M_is_algebra", model.m_q.closed_under_product() && model.m_q.closed_under_adjoint() &&
                                   model.m_q.contains_identity());
  report.check("D_is_algebra", model.d_q.closed_under_product() && model.d_q.closed_under_adjoint() &&
                                   model.d_q.contains_identity());
  const OperatorSpace full = full_matrix_algebra(dim, tol);
  report.check("M_equals_bicommutant",
               relative_commutant(full, relative_commutant(full, model.m_q)).same_as(model.m_q));

  const auto masa = masa_check(model.m_q, model.d_q);
  report.add("relative_commutant_dim", static_cast<unsigned long long>(masa.relative_commutant_dim));
  report.add("center_dim", static_cast<unsigned long long>(masa.center_dim));
  report.add("blocks", static_cast<unsigned long long>(model.relation.blocks().size()));
  report.check("D_abelian", masa.abelian);
  report.check("D_masa", masa.masa);
  report.check("center_matches_blocks", masa.center_dim == model.relation.blocks().size());

  const auto ex = expectation_properties(model);
  report.add_number("expectation.delta_error", ex.delta_error);
  report.add_number("expectation.bimodule_error", ex.bimodule_error);
  report.add_number("expectation.min_positive_value", ex.min_positive_value);
  report.add_number("expectation.faithful_eigenvalue", ex.faithful_eigenvalue);
  report.check("expectation_matches_delta", ex.delta_error <= tol);
  report.check("expectation_conditional",
               ex.idempotent_error <= tol && ex.unital_error <= tol && ex.range_error <= tol && ex.bimodule_error <= tol);
  report.check("expectation_positive", ex.min_positive_value >= -tol);
  report.check("expectation_faithful", ex.faithful_eigenvalue > tol);

  double normalizer_error = 0.0;
  bool normalizes = true;
  for (const auto& u : model.lambda_g) {
    normalizer_error = std::max(normalizer_error, max_deviation(u * u.adjoint() * u, u));
    for (const auto& d : model.d_q.basis())
      normalizes = normalizes && model.d_q.contains(Matrix(u * d * u.adjoint())) &&
                   model.d_q.contains(Matrix(u.adjoint() * d * u));
  }
  report.add_number("partial_isometry_error", normalizer_error);
  report.check("lambda_partial_isometries", normalizer_error <= tol);
  report.check("lambda_normalizes_D", normalizes);
  report.check("normalizers_span_M", OperatorSpace::span(dim, model.lambda_g, tol).same_as(model.m_q));

  const auto recovered = recover_extension(model.m_q, model.d_q);
  report.add("recovered_size", static_cast<unsigned long long>(recovered.monoid.size()));
  report.add("recovered_candidates", static_cast<unsigned long long>(recovered.candidates));
  const auto iso = isomorphism_by_atoms(recovered.monoid, model.ext.base());
  report.check("recovered_isomorphic", iso.has_value());
  return report;
}

}  // namespace cartanlab
