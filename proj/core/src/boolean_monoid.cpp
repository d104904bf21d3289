#include "cartanlab/boolean_monoid.hpp"

#include <algorithm>
#include <functional>

#include "cartanlab/errors.hpp"

namespace cartanlab {

namespace {

std::string join_names(std::span<const PartialBijection> family) {
  std::string out = "{";
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i > 0) out += ", ";
    out += family[i].to_string();
  }
  return out + "}";
}

// Bron-Kerbosch with pivoting on the orthogonality graph of nonzero elements.
// Calls `visit` on every maximal clique; returns false once `visit` does.
class MaximalFamilies {
 public:
  MaximalFamilies(std::vector<std::vector<bool>> adjacency, std::size_t guard)
      : adj_(std::move(adjacency)), guard_(guard) {}

  std::size_t run(const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> r, p, x;
    for (std::size_t i = 0; i < adj_.size(); ++i) p.push_back(i);
    expand(r, p, x, visit);
    return count_;
  }

 private:
  void expand(std::vector<std::size_t>& r, std::vector<std::size_t> p, std::vector<std::size_t> x,
              const std::function<void(const std::vector<std::size_t>&)>& visit) {
    if (p.empty() && x.empty()) {
      if (++count_ > guard_)
        throw SizeGuardError("more than " + std::to_string(guard_) + " maximal orthogonal families");
      visit(r);
      return;
    }
    std::size_t pivot = p.empty() ? x.front() : p.front();
    std::size_t best = 0;
    for (auto cand : {&p, &x})
      for (std::size_t u : *cand) {
        std::size_t deg = 0;
        for (std::size_t v : p) deg += adj_[u][v] ? 1 : 0;
        if (deg >= best) {
          best = deg;
          pivot = u;
        }
      }
    std::vector<std::size_t> candidates;
    for (std::size_t v : p)
      if (!adj_[pivot][v]) candidates.push_back(v);
    for (std::size_t v : candidates) {
      std::vector<std::size_t> np, nx;
      for (std::size_t w : p)
        if (adj_[v][w]) np.push_back(w);
      for (std::size_t w : x)
        if (adj_[v][w]) nx.push_back(w);
      r.push_back(v);
      expand(r, std::move(np), std::move(nx), visit);
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  }

  std::vector<std::vector<bool>> adj_;
  std::size_t guard_;
  std::size_t count_ = 0;
};

}  // namespace

std::vector<AtomSet> idempotent_atoms(const FiniteInverseMonoid& monoid) {
  std::vector<AtomSet> supports;
  for (std::size_t i : monoid.idempotents())
    if (!monoid[i].is_zero()) supports.push_back(monoid[i].domain());
  std::vector<AtomSet> atoms;
  for (AtomSet e : supports) {
    const bool minimal =
        std::none_of(supports.begin(), supports.end(), [&](AtomSet f) { return f != e && f.subset_of(e); });
    if (minimal) atoms.push_back(e);
  }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

AxiomReport check_axioms(const FiniteInverseMonoid& monoid, std::size_t family_guard) {
  AxiomReport report;
  const auto classification = classify(monoid);
  report.fundamental = classification.fundamental;
  const int n = monoid.atom_count();
  const auto& elems = monoid.elements();

  // (a) idempotent supports closed under union and complement in the unit.
  std::vector<AtomSet> supports;
  for (std::size_t i : monoid.idempotents()) supports.push_back(monoid[i].domain());
  auto has_support = [&](AtomSet e) { return std::find(supports.begin(), supports.end(), e) != supports.end(); };
  for (AtomSet e : supports) {
    const AtomSet complement = AtomSet::full(n).minus(e);
    if (!has_support(complement))
      report.boolean_a.fail("complement of idempotent " + e.to_string(n) + " is missing",
                            {PartialBijection::partial_identity(n, e)});
    for (AtomSet f : supports)
      if (!has_support(e | f))
        report.boolean_a.fail("join of idempotents " + e.to_string(n) + " and " + f.to_string(n) + " is missing",
                              {PartialBijection::partial_identity(n, e), PartialBijection::partial_identity(n, f)});
  }
  const auto atoms = idempotent_atoms(monoid);
  report.character_count = atoms.size();
  report.rebased = std::any_of(atoms.begin(), atoms.end(), [](AtomSet a) { return a.count() != 1; });

  if (report.boolean_a.pass) {
    report.locally_complete.detail = "finite Boolean algebra is complete";
  } else {
    report.locally_complete.fail("E(S) is not a Boolean algebra", report.boolean_a.witness);
  }

  // (b) meets and (c) binary orthogonal joins.
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      if (!monoid.contains(meet(elems[i], elems[j])))
        report.boolean_b.fail("meet of " + elems[i].to_string() + " and " + elems[j].to_string() + " is missing",
                              {elems[i], elems[j]});
      if (orthogonal(elems[i], elems[j])) {
        const PartialBijection pair[] = {elems[i], elems[j]};
        if (!monoid.contains(orthogonal_join(pair, n)))
          report.boolean_c.fail("join of orthogonal " + join_names(pair) + " is missing", {elems[i], elems[j]});
      }
    }

  // (d) joins of maximal orthogonal families.
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (!elems[i].is_zero()) nonzero.push_back(i);
  std::vector<std::vector<bool>> adjacency(nonzero.size(), std::vector<bool>(nonzero.size(), false));
  for (std::size_t a = 0; a < nonzero.size(); ++a)
    for (std::size_t b = 0; b < nonzero.size(); ++b)
      adjacency[a][b] = a != b && orthogonal(elems[nonzero[a]], elems[nonzero[b]]);
  MaximalFamilies families(std::move(adjacency), family_guard);
  report.maximal_families_checked = families.run([&](const std::vector<std::size_t>& clique) {
    std::vector<PartialBijection> family;
    for (std::size_t a : clique) family.push_back(elems[nonzero[a]]);
    std::sort(family.begin(), family.end());
    if (!monoid.contains(orthogonal_join(family, n)))
      report.complete_d.fail("join of maximal orthogonal family " + join_names(family) + " is missing", family);
  });
  if (report.complete_d.pass && !report.boolean_c.pass)
    report.complete_d.fail("binary orthogonal join missing: " + report.boolean_c.detail, report.boolean_c.witness);

  report.cartan = report.fundamental && report.boolean_a.pass && report.boolean_b.pass && report.boolean_c.pass &&
                  report.locally_complete.pass && report.complete_d.pass && report.hyperstonean;
  return report;
}

FiniteInverseMonoid rebase_on_idempotent_atoms(const FiniteInverseMonoid& monoid) {
  const auto atoms = idempotent_atoms(monoid);
  const int m = static_cast<int>(atoms.size());
  const int n = monoid.atom_count();
  std::vector<PartialBijection> images;
  for (const auto& s : monoid.elements()) {
    std::vector<int> image(static_cast<std::size_t>(m), PartialBijection::kUndefined);
    const auto sd = dagger(s);
    for (int a = 0; a < m; ++a) {
      const auto e = PartialBijection::partial_identity(n, atoms[static_cast<std::size_t>(a)]);
      const AtomSet conj = compose(compose(s, e), sd).domain();
      if (conj.empty()) continue;
      auto it = std::find(atoms.begin(), atoms.end(), conj);
      if (it == atoms.end())
        throw DomainError("E(S) is not a Boolean algebra: conjugate of an atom is not an atom");
      image[static_cast<std::size_t>(a)] = static_cast<int>(it - atoms.begin());
    }
    images.emplace_back(m, std::move(image));
  }
  return FiniteInverseMonoid::from_elements(m, std::move(images));
}

PartialBijection beta(const FiniteInverseMonoid& monoid, const PartialBijection& s) {
  const auto atoms = idempotent_atoms(monoid);
  const int m = static_cast<int>(atoms.size());
  std::vector<AtomSet> idem;
  for (std::size_t i : monoid.idempotents()) idem.push_back(monoid[i].domain());
  // Character rho_A evaluates an idempotent e to [A ⊆ e].
  auto character = [&](AtomSet atom) {
    std::vector<bool> values;
    for (AtomSet e : idem) values.push_back(atom.subset_of(e));
    return values;
  };
  const auto sd = dagger(s);
  const AtomSet source = compose(sd, s).domain();
  std::vector<int> image(static_cast<std::size_t>(m), PartialBijection::kUndefined);
  for (int a = 0; a < m; ++a) {
    const AtomSet atom = atoms[static_cast<std::size_t>(a)];
    if (!atom.subset_of(source)) continue;
    std::vector<bool> moved;
    for (AtomSet e : idem) {
      const auto pulled = compose(compose(sd, PartialBijection::partial_identity(monoid.atom_count(), e)), s);
      moved.push_back(atom.subset_of(pulled.domain()));
    }
    for (int b = 0; b < m; ++b)
      if (character(atoms[static_cast<std::size_t>(b)]) == moved) {
        image[static_cast<std::size_t>(a)] = b;
        break;
      }
    if (image[static_cast<std::size_t>(a)] == PartialBijection::kUndefined)
      throw InvariantViolation("beta_s(rho) is not a character for s = " + s.to_string());
  }
  PartialBijection result(m, std::move(image));
  const bool singleton_atoms = std::all_of(atoms.begin(), atoms.end(), [](AtomSet a) { return a.count() == 1; });
  if (singleton_atoms && m == monoid.atom_count() && result != s)
    throw InvariantViolation("beta_s differs from s on the canonical realization: " + s.to_string());
  return result;
}

std::vector<PartialBijection> chop(std::span<const PartialBijection> inputs) {
  if (inputs.empty()) throw DomainError("chop needs at least one element");
  for (const auto& s : inputs)
    if (s.is_zero()) throw DomainError("chop input contains the zero element");
  const int n = inputs.front().atom_count();

  std::vector<PartialBijection> pieces = {inputs.front()};
  for (std::size_t step = 1; step < inputs.size(); ++step) {
    const auto& sn = inputs[step];
    std::vector<PartialBijection> next;
    for (const auto& b : pieces) {
      const auto inside = meet(b, sn);
      // b minus its agreement set with s_N.
      auto outside = relative_complement(b, inside);
      if (!inside.is_zero()) next.push_back(inside);
      if (!outside.is_zero()) next.push_back(std::move(outside));
    }
    std::vector<PartialBijection> below;
    for (const auto& x : next)
      if (natural_leq(x, sn)) below.push_back(x);
    const auto covered = orthogonal_join(below, n);
    auto rest = relative_complement(sn, covered);
    if (!rest.is_zero()) next.push_back(std::move(rest));
    pieces = std::move(next);
  }
  std::sort(pieces.begin(), pieces.end());
  return pieces;
}

std::string verify_chop(std::span<const PartialBijection> inputs, std::span<const PartialBijection> output) {
  if (inputs.empty()) return "no inputs";
  const int n = inputs.front().atom_count();
  for (std::size_t i = 0; i < output.size(); ++i) {
    const auto& a = output[i];
    if (a.is_zero()) return "(a) zero in output";
    for (std::size_t j = i + 1; j < output.size(); ++j)
      if (!meet(a, output[j]).is_zero())
        return "(b) " + a.to_string() + " and " + output[j].to_string() + " are not meet orthogonal";
    bool below_some = false;
    for (const auto& s : inputs) {
      const auto m = meet(a, s);
      if (!m.is_zero() && m != a) return "(c.i) " + a.to_string() + " ∧ " + s.to_string() + " not in {a, 0}";
      below_some = below_some || m == a;
    }
    if (!below_some) return "(c.ii) " + a.to_string() + " is below no input";
  }
  for (const auto& s : inputs) {
    std::vector<PartialBijection> below;
    for (const auto& a : output)
      if (natural_leq(a, s)) below.push_back(a);
    PartialBijection joined;
    try {
      joined = orthogonal_join(below, n);
    } catch (const OrthogonalityError&) {
      return "(d) pieces below " + s.to_string() + " are not orthogonal";
    }
    if (joined != s) return "(d) pieces below " + s.to_string() + " join to " + joined.to_string();
  }
  return {};
}

GroupoidRelation::GroupoidRelation(int atom_count, std::vector<AtomSet> rows) : n_(atom_count), rows_(std::move(rows)) {
  if (rows_.size() != static_cast<std::size_t>(n_)) throw StructuralError("relation row count mismatch");
}

std::size_t GroupoidRelation::size() const {
  std::size_t total = 0;
  for (AtomSet r : rows_) total += static_cast<std::size_t>(r.count());
  return total;
}

std::vector<AtomSet> GroupoidRelation::blocks() const {
  std::vector<AtomSet> out;
  AtomSet seen;
  for (int x = 0; x < n_; ++x) {
    if (seen.contains(x)) continue;
    out.push_back(rows_[static_cast<std::size_t>(x)]);
    seen = seen | rows_[static_cast<std::size_t>(x)];
  }
  return out;
}

GroupoidRelation groupoid_relation(const FiniteInverseMonoid& monoid) {
  const int n = monoid.atom_count();
  std::vector<AtomSet> rows(static_cast<std::size_t>(n));
  for (const auto& s : monoid.elements())
    for (int y : s.domain().atoms()) rows[static_cast<std::size_t>(s(y))].insert(y);
  GroupoidRelation rel(n, rows);
  for (int x = 0; x < n; ++x) {
    if (!rel.contains(x, x)) throw InvariantViolation("relation is not reflexive at atom " + std::to_string(x));
    for (int y : rel.row(x).atoms()) {
      if (!rel.contains(y, x))
        throw InvariantViolation("relation is not symmetric at (" + std::to_string(x) + "," + std::to_string(y) + ")");
      if (!rel.row(y).subset_of(rel.row(x)))
        throw InvariantViolation("relation is not transitive through atom " + std::to_string(y));
    }
  }
  return rel;
}

}  // namespace cartanlab
