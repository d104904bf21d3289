#include "cartanlab/spectral_bimodule.hpp"

#include <algorithm>

#include "cartanlab/errors.hpp"

namespace cartanlab {

namespace {

bool subset(const ElementSet& a, const ElementSet& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

bool product_closed(const FiniteInverseMonoid& s, const ElementSet& a) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (a[j] && !a[s.product(i, j)]) return false;
  }
  return true;
}

Matrix row_projection(const RBasis& basis, int x) {
  Matrix q = Matrix::Zero(basis.size(), basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i)
    if (basis.pair(i).first == x) q(i, i) = 1.0;
  return q;
}

double multiplicative_error(const OperatorSpace& a, const OperatorSpace& n) {
  double worst = 0.0;
  for (const auto& x : a.basis())
    for (const auto& y : a.basis())
      worst = std::max(worst, max_deviation(n.project(x * y), n.project(x) * n.project(y)));
  return worst;
}

}  // namespace

ElementSet element_set(const FiniteInverseMonoid& s, std::span<const PartialBijection> members) {
  ElementSet out(s.size(), false);
  for (const auto& m : members) out[s.require_index(m)] = true;
  return out;
}

std::vector<PartialBijection> members(const FiniteInverseMonoid& s, const ElementSet& a) {
  std::vector<PartialBijection> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (a[i]) out.push_back(s[i]);
  return out;
}

std::string describe(const FiniteInverseMonoid& s, const ElementSet& a) {
  std::string out = "{";
  bool first = true;
  for (const auto& m : members(s, a)) {
    if (!first) out += ", ";
    out += m.to_string();
    first = false;
  }
  return out + "}";
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  ElementSet out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
  return out;
}

ElementSet set_intersection(const ElementSet& a, const ElementSet& b) {
  ElementSet out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

ElementSet set_dagger(const FiniteInverseMonoid& s, const ElementSet& a) {
  ElementSet out(a.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) out[s.dagger_of(i)] = true;
  return out;
}

ElementSet idempotent_set(const FiniteInverseMonoid& s) {
  ElementSet out(s.size(), false);
  for (std::size_t i : s.idempotents()) out[i] = true;
  return out;
}

ElementSet whole_set(const FiniteInverseMonoid& s) { return ElementSet(s.size(), true); }

bool is_spectral_set(const FiniteInverseMonoid& s, const ElementSet& a) {
  if (!a[s.zero_index()]) return false;
  const int n = s.atom_count();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!a[j] && natural_leq(s[j], s[i])) return false;
      if (a[j] && orthogonal(s[i], s[j])) {
        const PartialBijection pair[] = {s[i], s[j]};
        const auto idx = s.index_of(orthogonal_join(pair, n));
        if (!idx || !a[*idx]) return false;
      }
    }
  }
  return true;
}

ElementSet spectral_closure(const FiniteInverseMonoid& s, const ElementSet& gen) {
  const int n = s.atom_count();
  ElementSet out = gen;
  out[s.zero_index()] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!out[i]) continue;
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (!out[j] && natural_leq(s[j], s[i])) {
          out[j] = true;
          changed = true;
        }
        if (out[j] && orthogonal(s[i], s[j])) {
          const PartialBijection pair[] = {s[i], s[j]};
          const auto idx = s.index_of(orthogonal_join(pair, n));
          if (idx && !out[*idx]) {
            out[*idx] = true;
            changed = true;
          }
        }
      }
    }
  }
  return out;
}

ElementSet join_span(const FiniteInverseMonoid& s, const ElementSet& a1, const ElementSet& a2) {
  const ElementSet closure = spectral_closure(s, set_union(a1, a2));
  const int n = s.atom_count();
  ElementSet joins(s.size(), false);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!a1[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!a2[j] || !orthogonal(s[i], s[j])) continue;
      const PartialBijection pair[] = {s[i], s[j]};
      if (const auto idx = s.index_of(orthogonal_join(pair, n))) joins[*idx] = true;
    }
  }
  if (joins != closure)
    throw InvariantViolation("join span disagrees with the orthogonal-join formula: " + describe(s, closure) + " vs " +
                             describe(s, joins));
  return closure;
}

std::vector<ElementSet> enumerate_spectral_sets(const FiniteInverseMonoid& s, std::size_t guard) {
  std::vector<std::size_t> minimal;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].is_zero()) continue;
    bool is_min = true;
    for (std::size_t j = 0; j < s.size() && is_min; ++j)
      if (j != i && !s[j].is_zero() && natural_leq(s[j], s[i])) is_min = false;
    if (is_min) minimal.push_back(i);
  }
  if (minimal.size() > guard || minimal.size() >= 63)
    throw SizeGuardError(std::to_string(minimal.size()) + " minimal elements exceed the spectral guard of " +
                         std::to_string(guard));

  std::vector<ElementSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << minimal.size()); ++mask) {
    ElementSet gen(s.size(), false);
    for (std::size_t b = 0; b < minimal.size(); ++b)
      if ((mask >> b) & 1U) gen[minimal[b]] = true;
    ElementSet closed = spectral_closure(s, gen);
    bool trace_matches = true;
    for (std::size_t b = 0; b < minimal.size(); ++b)
      if (closed[minimal[b]] != (((mask >> b) & 1U) != 0)) trace_matches = false;
    if (!trace_matches || !is_spectral_set(s, closed))
      throw InvariantViolation("spectral set not determined by its minimal elements: " + describe(s, closed));
    out.push_back(std::move(closed));
  }
  return out;
}

OperatorSpace psi(const CartanModel& model, const ElementSet& a) {
  OperatorSpace out(model.basis.size(), model.tol);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) out.add(model.lambda_j[i]);
  return out;
}

bool is_bimodule(const CartanModel& model, const OperatorSpace& b) {
  if (!model.m_q.contains(b)) return false;
  for (const auto& x : b.basis())
    for (const auto& d : model.d_q.basis())
      if (!b.contains(Matrix(d * x)) || !b.contains(Matrix(x * d))) return false;
  return true;
}

ElementSet theta_normalizers(const CartanModel& model, const OperatorSpace& b) {
  const auto& base = model.ext.base();
  const int n = base.atom_count();
  std::vector<Matrix> q;
  for (int x = 0; x < n; ++x) q.push_back(row_projection(model.basis, x));
  // nonzero[x][y]: Q_x B Q_y != 0.
  std::vector<std::vector<bool>> nonzero(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      nonzero[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          std::any_of(b.basis().begin(), b.basis().end(), [&](const Matrix& m) {
            return (q[static_cast<std::size_t>(x)] * m * q[static_cast<std::size_t>(y)]).cwiseAbs().maxCoeff() >
                   model.tol;
          });
  ElementSet out(base.size(), false);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto& s = base[i];
    const auto dom = s.domain().atoms();
    out[i] = std::all_of(dom.begin(), dom.end(), [&](int y) {
      return nonzero[static_cast<std::size_t>(s(y))][static_cast<std::size_t>(y)];
    });
  }
  return out;
}

ElementSet theta(const CartanModel& model, const OperatorSpace& b) {
  if (!is_bimodule(model, b)) throw DomainError("subspace is not a D-bimodule inside M_q");
  const auto& base = model.ext.base();
  ElementSet out(base.size(), false);
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = b.contains(model.lambda_j[i]);
  if (out != theta_normalizers(model, b))
    throw InvariantViolation("section membership and normalizer graphs disagree on " + describe(base, out));
  return out;
}

std::vector<OperatorSpace> enumerate_bimodules(const CartanModel& model, std::size_t guard_bits) {
  const auto& base = model.ext.base();
  const int n = base.atom_count();
  std::vector<Matrix> q;
  for (int x = 0; x < n; ++x) q.push_back(row_projection(model.basis, x));
  std::vector<Matrix> blocks;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      OperatorSpace block(model.basis.size(), model.tol);
      for (const auto& m : model.m_q.basis()) block.add(q[static_cast<std::size_t>(x)] * m * q[static_cast<std::size_t>(y)]);
      if (block.dimension() == 0) continue;
      if (block.dimension() != 1) throw InvariantViolation("block Q_x M Q_y is not one dimensional");
      blocks.push_back(block.basis().front());
    }
  if (blocks.size() > guard_bits || blocks.size() >= 63)
    throw SizeGuardError(std::to_string(blocks.size()) + " blocks exceed the bimodule guard");
  std::vector<OperatorSpace> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << blocks.size()); ++mask) {
    OperatorSpace space(model.basis.size(), model.tol);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if ((mask >> b) & 1U) space.add(blocks[b]);
    out.push_back(std::move(space));
  }
  return out;
}

std::vector<ElementSet> full_submonoids(const FiniteInverseMonoid& s, std::size_t guard) {
  const ElementSet idem = idempotent_set(s);
  std::vector<ElementSet> out;
  for (auto& a : enumerate_spectral_sets(s, guard))
    if (subset(idem, a) && set_dagger(s, a) == a && product_closed(s, a)) out.push_back(std::move(a));
  return out;
}

std::vector<OperatorSpace> intermediate_algebras(const CartanModel& model, std::size_t guard_bits) {
  std::vector<OperatorSpace> out;
  for (auto& b : enumerate_bimodules(model, guard_bits))
    if (b.contains_identity() && b.closed_under_product() && b.closed_under_adjoint() && b.contains(model.d_q))
      out.push_back(std::move(b));
  return out;
}

IntermediateReport intermediate_algebra_check(const CartanModel& model, std::size_t guard) {
  IntermediateReport report;
  const auto subs = full_submonoids(model.ext.base(), guard);
  const auto algebras = intermediate_algebras(model);
  report.submonoids = subs.size();
  report.algebras = algebras.size();
  report.algebras_valid = true;
  std::vector<int> hits(algebras.size(), 0);
  for (const auto& t : subs) {
    const auto image = psi(model, t);
    report.algebras_valid = report.algebras_valid && image.contains_identity() && image.closed_under_product() &&
                            image.closed_under_adjoint() && image.contains(model.d_q);
    for (std::size_t i = 0; i < algebras.size(); ++i)
      if (algebras[i].same_as(image)) ++hits[i];
  }
  report.bijective = subs.size() == algebras.size() && std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  return report;
}

std::vector<ElementSet> spectral_monoids(const FiniteInverseMonoid& s, std::size_t guard) {
  const ElementSet idem = idempotent_set(s);
  std::vector<ElementSet> out;
  for (auto& a : enumerate_spectral_sets(s, guard))
    if (subset(idem, a) && product_closed(s, a)) out.push_back(std::move(a));
  return out;
}

std::vector<ElementSet> msd(const FiniteInverseMonoid& s, std::size_t guard) {
  const ElementSet whole = whole_set(s);
  std::vector<ElementSet> out;
  for (auto& a : spectral_monoids(s, guard))
    if (join_span(s, a, set_dagger(s, a)) == whole) out.push_back(std::move(a));
  return out;
}

std::vector<ElementSet> mtr(const FiniteInverseMonoid& s, std::size_t guard) {
  const ElementSet idem = idempotent_set(s);
  std::vector<ElementSet> out;
  for (auto& a : msd(s, guard))
    if (set_intersection(a, set_dagger(s, a)) == idem) out.push_back(std::move(a));
  return out;
}

SubdiagonalReport verify_subdiagonal(const CartanModel& model, const ElementSet& a, std::size_t guard) {
  SubdiagonalReport report;
  const auto alg = psi(model, a);
  const auto n = alg.intersect(alg.adjoint());
  report.dim_a = alg.dimension();
  report.dim_n = n.dimension();
  report.algebra = alg.closed_under_product() && alg.contains_identity();
  report.multiplicative_error = multiplicative_error(alg, n);
  for (const auto& x : model.m_q.basis())
    for (const auto& n1 : n.basis())
      for (const auto& n2 : n.basis())
        report.bimodule_error = std::max(report.bimodule_error, max_deviation(n.project(n1 * x * n2), n1 * n.project(x) * n2));
  report.spans = alg.sum(alg.adjoint()).same_as(model.m_q);

  report.maximal = true;
  const auto& base = model.ext.base();
  for (const auto& candidate : spectral_monoids(base, guard)) {
    if (candidate == a || !subset(a, candidate)) continue;
    const auto bigger = psi(model, candidate);
    const auto bigger_n = bigger.intersect(bigger.adjoint());
    if (bigger_n.same_as(n) && multiplicative_error(bigger, n) <= model.tol) report.maximal = false;
  }
  report.pass = report.algebra && report.spans && report.maximal && report.multiplicative_error <= model.tol &&
                report.bimodule_error <= model.tol;
  return report;
}

}  // namespace cartanlab
