#include "cartanlab/extension.hpp"

#include <algorithm>
#include <numeric>

#include "cartanlab/errors.hpp"

namespace cartanlab {

namespace {

std::size_t bounded_power(int k, std::size_t exponent, std::size_t guard, const std::string& what) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (total > guard / static_cast<std::size_t>(k))
      throw SizeGuardError(what + " exceeds the guard of " + std::to_string(guard));
    total *= static_cast<std::size_t>(k);
  }
  if (total > guard) throw SizeGuardError(what + " exceeds the guard of " + std::to_string(guard));
  return total;
}

// Advances a base-k odometer; false once it wraps around to all zeros.
bool advance(std::vector<int>& digits, int k) {
  for (int& d : digits) {
    if (++d < k) return true;
    d = 0;
  }
  return false;
}

void require_singleton_atoms(const FiniteInverseMonoid& base) {
  for (int a = 0; a < base.atom_count(); ++a)
    if (!base.contains(PartialBijection::partial_identity(base.atom_count(), AtomSet::single(a))))
      throw DomainError("idempotents of S must separate atoms; rebase onto the atoms of E(S) first");
}

std::string describe(const FiniteInverseMonoid& base, std::size_t s, std::size_t t, std::size_t u) {
  return "(" + base[s].to_string() + ", " + base[t].to_string() + ", " + base[u].to_string() + ")";
}

struct Triple {
  int x;
  int z;
  int y;
};

// Composable triples (x, z, y) of R with x != z and z != y.
std::vector<Triple> germ_triples(const FiniteInverseMonoid& base) {
  const int n = base.atom_count();
  std::vector<std::vector<bool>> related(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (const auto& s : base.elements())
    for (int y : s.domain().atoms()) related[static_cast<std::size_t>(s(y))][static_cast<std::size_t>(y)] = true;
  std::vector<Triple> out;
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < n; ++y)
        if (x != z && z != y && related[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)] &&
            related[static_cast<std::size_t>(z)][static_cast<std::size_t>(y)])
          out.push_back({x, z, y});
  return out;
}

}  // namespace

CocycleTable::CocycleTable(const FiniteInverseMonoid& base, int k, bool fill)
    : n_(base.atom_count()), k_(k), size_(base.size()), zeros_(static_cast<std::size_t>(base.atom_count()), 0) {
  if (k < 1) throw DomainError("phase order k must be at least 1");
  support_.resize(size_ * size_);
  required_.resize(size_ * size_);
  present_.assign(size_ * size_, fill);
  entries_.resize(size_ * size_);
  for (std::size_t s = 0; s < size_; ++s)
    for (std::size_t t = 0; t < size_; ++t) {
      const std::size_t cell = s * size_ + t;
      support_[cell] = base[base.product(s, t)].domain();
      required_[cell] = !base.is_idempotent(s) && !base.is_idempotent(t) && !support_[cell].empty();
      if (fill) entries_[cell] = zeros_;
    }
}

CocycleTable CocycleTable::trivial(const FiniteInverseMonoid& base, int k) { return CocycleTable(base, k, true); }

CocycleTable CocycleTable::empty(const FiniteInverseMonoid& base, int k) { return CocycleTable(base, k, false); }

const std::vector<int>& CocycleTable::at(std::size_t s, std::size_t t) const {
  const std::size_t cell = s * size_ + t;
  if (present_[cell]) return entries_[cell];
  if (required_[cell])
    throw FormatError("missing cocycle entry for pair (" + std::to_string(s) + ", " + std::to_string(t) + ")");
  return zeros_;
}

void CocycleTable::set(std::size_t s, std::size_t t, std::vector<int> phase) {
  if (s >= size_ || t >= size_) throw DomainError("cocycle entry index out of range");
  if (phase.size() != static_cast<std::size_t>(n_)) throw StructuralError("cocycle phase array has the wrong length");
  for (int& p : phase) p = mod(p, k_);
  const std::size_t cell = s * size_ + t;
  entries_[cell] = std::move(phase);
  present_[cell] = true;
}

bool CocycleTable::operator==(const CocycleTable& other) const {
  if (n_ != other.n_ || k_ != other.k_ || size_ != other.size_ || support_ != other.support_) return false;
  for (std::size_t cell = 0; cell < size_ * size_; ++cell) {
    const bool missing = required_[cell] && !present_[cell];
    if (missing != (other.required_[cell] && !other.present_[cell])) return false;
    if (missing) continue;
    const auto& a = present_[cell] ? entries_[cell] : zeros_;
    const auto& b = other.present_[cell] ? other.entries_[cell] : other.zeros_;
    if (a != b) return false;
  }
  return true;
}

CocycleReport validate_cocycle(const FiniteInverseMonoid& base, const CocycleTable& c) {
  if (c.monoid_size() != base.size() || c.atom_count() != base.atom_count())
    throw DomainError("cocycle table does not match the monoid");
  CocycleReport report;
  const std::size_t m = base.size();
  const int k = c.k();
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) {
      const auto& entry = c.at(s, t);
      const AtomSet dom = base[base.product(s, t)].domain();
      for (int a = 0; a < base.atom_count(); ++a)
        if (!dom.contains(a) && entry[static_cast<std::size_t>(a)] != 0) {
          report.supported = false;
          report.violations.push_back({s, t, t, "entry nonzero outside dom(st) at atom " + std::to_string(a)});
          break;
        }
      if ((base.is_idempotent(s) || base.is_idempotent(t)) &&
          std::any_of(entry.begin(), entry.end(), [](int p) { return p != 0; })) {
        report.normalized = false;
        report.violations.push_back({s, t, t, "entry not zero on an idempotent argument"});
      }
    }
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t st = base.product(s, t);
      if (base[st].is_zero()) continue;
      for (std::size_t u = 0; u < m; ++u) {
        const std::size_t tu = base.product(t, u);
        const PartialBijection& uu = base[u];
        const AtomSet dom = base[base.product(st, u)].domain();
        const auto& c_tu = c.at(t, u);
        const auto& c_s_tu = c.at(s, tu);
        const auto& c_st = c.at(s, t);
        const auto& c_st_u = c.at(st, u);
        for (int y : dom.atoms()) {
          const auto yi = static_cast<std::size_t>(y);
          const int lhs = c_tu[yi] + c_s_tu[yi];
          const int rhs = c_st[static_cast<std::size_t>(uu(y))] + c_st_u[yi];
          if (mod(lhs - rhs, k) != 0) {
            report.identity = false;
            report.violations.push_back({s, t, u, "cocycle identity fails at atom " + std::to_string(y)});
            break;
          }
        }
      }
    }
  report.pass = report.supported && report.normalized && report.identity;
  return report;
}

Extension::Extension(FiniteInverseMonoid base, CocycleTable cocycle)
    : base_(std::move(base)), cocycle_(std::move(cocycle)) {
  if (cocycle_.monoid_size() != base_.size() || cocycle_.atom_count() != base_.atom_count())
    throw DomainError("cocycle table does not match the monoid");
}

PhasedElement Extension::multiply(const PhasedElement& v, const PhasedElement& w) const {
  const std::size_t si = base_.require_index(v.bijection);
  const std::size_t ti = base_.require_index(w.bijection);
  const PartialBijection& t = w.bijection;
  PhasedElement out(base_[base_.product(si, ti)], std::vector<int>(static_cast<std::size_t>(atom_count()), 0));
  const auto& c = cocycle_.at(si, ti);
  for (int y : out.bijection.domain().atoms()) {
    const auto yi = static_cast<std::size_t>(y);
    out.phase[yi] = mod(v.phase[static_cast<std::size_t>(t(y))] + w.phase[yi] + c[yi], k());
  }
  return out;
}

PhasedElement Extension::dagger(const PhasedElement& v) const {
  const std::size_t si = base_.require_index(v.bijection);
  const std::size_t di = base_.dagger_of(si);
  const auto& c = cocycle_.at(di, si);
  PhasedElement out(base_[di], std::vector<int>(static_cast<std::size_t>(atom_count()), 0));
  for (int y : v.bijection.domain().atoms()) {
    const auto yi = static_cast<std::size_t>(y);
    out.phase[static_cast<std::size_t>(v.bijection(y))] = mod(-(v.phase[yi] + c[yi]), k());
  }
  return out;
}

PhasedElement Extension::meet(const PhasedElement& v, const PhasedElement& w) const {
  AtomSet agree;
  for (int y : (v.bijection.domain() & w.bijection.domain()).atoms())
    if (v.bijection(y) == w.bijection(y) && v.phase[static_cast<std::size_t>(y)] == w.phase[static_cast<std::size_t>(y)])
      agree.insert(y);
  return PhasedElement(restrict(v.bijection, agree), v.phase);
}

bool Extension::leq(const PhasedElement& v, const PhasedElement& w) const { return meet(v, w) == v; }

bool Extension::contains(const PhasedElement& v) const {
  if (v.bijection.atom_count() != atom_count() || !base_.contains(v.bijection)) return false;
  return std::all_of(v.phase.begin(), v.phase.end(), [&](int p) { return p >= 0 && p < k(); });
}

PhasedElement Extension::unit() const { return PhasedElement::lift(base_[base_.unit_index()]); }

PhasedOps Extension::ops() const {
  return {[this](const PhasedElement& v, const PhasedElement& w) { return multiply(v, w); },
          [this](const PhasedElement& v) { return dagger(v); }};
}

std::size_t Extension::order() const {
  std::size_t total = 0;
  for (const auto& s : base_.elements())
    total += bounded_power(k(), s.rank(), static_cast<std::size_t>(-1) / 2, "extension order");
  return total;
}

std::vector<PhasedElement> Extension::elements(std::size_t guard) const {
  std::size_t total = 0;
  for (const auto& s : base_.elements()) {
    total += bounded_power(k(), s.rank(), guard, "extension size");
    if (total > guard) throw SizeGuardError("extension size exceeds the guard of " + std::to_string(guard));
  }
  std::vector<PhasedElement> out;
  out.reserve(total);
  for (const auto& s : base_.elements()) {
    auto f = fiber(s);
    std::move(f.begin(), f.end(), std::back_inserter(out));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PhasedElement> Extension::fiber(const PartialBijection& s) const {
  const auto dom = s.domain().atoms();
  std::vector<int> digits(dom.size(), 0);
  std::vector<PhasedElement> out;
  do {
    std::vector<int> phase(static_cast<std::size_t>(atom_count()), 0);
    for (std::size_t i = 0; i < dom.size(); ++i) phase[static_cast<std::size_t>(dom[i])] = digits[i];
    out.emplace_back(s, std::move(phase));
  } while (advance(digits, k()));
  return out;
}

Section order_preserving_section(const Extension& ext) {
  const auto& base = ext.base();
  const std::size_t m = base.size();
  const int n = base.atom_count();

  // B is closed under dagger; s with 0 != s ∧ s† != s is skipped.
  std::vector<std::size_t> b_set = {base.unit_index()};
  const auto orthogonal_to_b = [&](std::size_t i) {
    return std::all_of(b_set.begin(), b_set.end(), [&](std::size_t b) { return meet(base[i], base[b]).is_zero(); });
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (i == base.unit_index() || base[i].is_zero() || !orthogonal_to_b(i)) continue;
    const std::size_t id = base.dagger_of(i);
    if (id == i) {
      b_set.push_back(i);
    } else if (meet(base[i], base[id]).is_zero()) {
      b_set.push_back(i);
      b_set.push_back(id);
    }
  }

  std::vector<PhasedElement> lifts(m);
  std::vector<bool> lifted(m, false);
  for (std::size_t b : b_set) {
    if (lifted[b]) continue;
    const std::size_t bd = base.dagger_of(b);
    PhasedElement jb = PhasedElement::lift(base[b]);
    if (bd == b && b != base.unit_index()) {
      // Fixed-point-free involution: solve p(s(y)) = -(p(y) + c(s, s)(y)) orbit by orbit.
      const PhasedElement square = ext.multiply(jb, jb);
      for (int y : base[b].domain().atoms()) {
        const int sy = base[b](y);
        if (y < sy) {
          const int c = square.phase[static_cast<std::size_t>(y)];
          jb.phase[static_cast<std::size_t>(sy)] = (ext.k() - c) % ext.k();
        }
      }
    }
    lifts[b] = jb;
    lifted[b] = true;
    if (bd != b) {
      lifts[bd] = ext.dagger(jb);
      lifted[bd] = true;
    }
  }

  std::vector<PhasedElement> values(m);
  std::vector<bool> assigned(m, false);
  values[base.zero_index()] = PhasedElement::lift(base[base.zero_index()]);
  assigned[base.zero_index()] = true;
  for (std::size_t b : b_set) {
    const PhasedElement& jb = lifts[b];
    for (std::size_t i = 0; i < m; ++i) {
      if (base[i].is_zero() || !natural_leq(base[i], base[b])) continue;
      const auto e = PhasedElement::lift(compose(dagger(base[b]), base[i]));
      values[i] = ext.multiply(jb, e);
      assigned[i] = true;
    }
  }

  for (std::size_t t = 0; t < m; ++t) {
    if (assigned[t]) continue;
    const PhasedElement w = PhasedElement::lift(base[t]);
    const PhasedElement wd = ext.dagger(w);
    std::vector<int> glued(static_cast<std::size_t>(n), 0);
    AtomSet covered;
    for (std::size_t b : b_set) {
      const std::size_t tb = base.require_index(meet(base[t], base[b]));
      if (base[tb].is_zero()) continue;
      const PhasedElement h = ext.multiply(wd, values[tb]);
      if (!h.is_phased_idempotent()) throw InvariantViolation("w† j(t ∧ s) is not in P for t = " + base[t].to_string());
      for (int y : h.bijection.domain().atoms()) glued[static_cast<std::size_t>(y)] = h.phase[static_cast<std::size_t>(y)];
      covered = covered | h.bijection.domain();
    }
    if (covered != base[t].domain())
      throw InvariantViolation("pieces t ∧ s do not cover dom(t) for t = " + base[t].to_string());
    const PhasedElement h(PartialBijection::partial_identity(n, covered), std::move(glued));
    values[t] = ext.multiply(w, h);
  }
  return Section(std::move(values));
}

SectionReport validate_section(const Extension& ext, const Section& j) {
  const auto& base = ext.base();
  const std::size_t m = base.size();
  if (j.size() != m) throw DomainError("section has " + std::to_string(j.size()) + " values for |S| = " + std::to_string(m));
  for (std::size_t i = 0; i < m; ++i)
    if (j[i].bijection != base[i] || !ext.contains(j[i]))
      throw DomainError("not a section of q at " + base[i].to_string());

  SectionReport report;
  const bool unit_ok = j[base.unit_index()] == ext.unit();
  if (!unit_ok) {
    const std::string why = "j(1) = " + j[base.unit_index()].to_string() + " is not the unit";
    report.order_preserving = report.idempotent_compatible = report.meet_preserving = false;
    report.witness_a = report.witness_b = report.witness_c = why;
  }

  for (std::size_t s = 0; s < m && report.order_preserving; ++s)
    for (std::size_t t = 0; t < m; ++t)
      if (natural_leq(base[s], base[t]) && !ext.leq(j[s], j[t])) {
        report.order_preserving = false;
        report.witness_a = base[s].to_string() + " <= " + base[t].to_string() + " but " + j[s].to_string() +
                           " is not below " + j[t].to_string();
        break;
      }

  const auto& idem = base.idempotents();
  for (std::size_t e : idem) {
    if (!report.idempotent_compatible) break;
    for (std::size_t s = 0; s < m && report.idempotent_compatible; ++s)
      for (std::size_t f : idem) {
        const std::size_t esf = base.product(base.product(e, s), f);
        if (j[esf] != ext.multiply(ext.multiply(j[e], j[s]), j[f])) {
          report.idempotent_compatible = false;
          report.witness_b = "(e, s, f) = " + describe(base, e, s, f);
          break;
        }
      }
  }

  for (std::size_t s = 0; s < m && report.meet_preserving; ++s)
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t st = base.require_index(meet(base[s], base[t]));
      if (j[st] != ext.meet(j[s], j[t])) {
        report.meet_preserving = false;
        report.witness_c = "j(s ∧ t) != j(s) ∧ j(t) for (" + base[s].to_string() + ", " + base[t].to_string() + ")";
        break;
      }
    }

  for (std::size_t s = 0; s < m; ++s)
    if (j[base.dagger_of(s)] != ext.dagger(j[s])) {
      report.dagger_preserving = false;
      break;
    }
  return report;
}

PhasedElement lausch_alpha(const Extension& ext, const Section& j, std::size_t s, std::size_t t) {
  const auto& base = ext.base();
  const std::size_t st = base.product(s, t);
  auto out = ext.multiply(ext.multiply(ext.dagger(j[st]), j[s]), j[t]);
  if (!out.is_phased_idempotent()) throw InvariantViolation("alpha(s, t) is not in P: " + out.to_string());
  return out;
}

PhasedElement sigma(const Extension& ext, const Section& j, const PhasedElement& v, std::size_t s) {
  const auto& base = ext.base();
  const std::size_t qs = base.product(base.require_index(v.bijection), s);
  auto out = ext.multiply(ext.multiply(ext.dagger(j[qs]), v), j[s]);
  if (!out.is_phased_idempotent()) throw InvariantViolation("sigma(v, s) is not in P: " + out.to_string());
  return out;
}

PhasedElement delta(const Extension& ext, const Section& j, const PhasedElement& v) {
  const auto& base = ext.base();
  const auto fixed = meet(v.bijection, PartialBijection::identity(base.atom_count()));
  return ext.multiply(v, j[base.require_index(fixed)]);
}

PhasedElement sigma_from_germs(const Extension& ext, const Section& j, const PhasedElement& v, std::size_t s) {
  const auto& base = ext.base();
  const int n = base.atom_count();
  const std::size_t qv = base.require_index(v.bijection);
  const PhasedElement h = ext.multiply(ext.dagger(j[qv]), v);
  const PartialBijection& sb = base[s];
  const PartialBijection qs = compose(v.bijection, sb);
  std::vector<int> phase(static_cast<std::size_t>(n), 0);
  for (int y : qs.domain().atoms()) {
    const int z = sb(y);
    const int x = qs(y);
    const std::size_t outer = base.require_index(PartialBijection::singleton(n, z, x));
    const std::size_t inner = base.require_index(PartialBijection::singleton(n, y, z));
    const int germ = lausch_alpha(ext, j, outer, inner).phase[static_cast<std::size_t>(y)];
    phase[static_cast<std::size_t>(y)] = mod(h.phase[static_cast<std::size_t>(z)] + germ, ext.k());
  }
  return PhasedElement(PartialBijection::partial_identity(n, qs.domain()), std::move(phase));
}

CocycleTable coboundary(const FiniteInverseMonoid& base, int k, const Cochain& b) {
  return perturb(base, CocycleTable::trivial(base, k), b);
}

CocycleTable perturb(const FiniteInverseMonoid& base, const CocycleTable& c, const Cochain& b) {
  const std::size_t m = base.size();
  if (b.size() != m) throw DomainError("cochain length does not match |S|");
  const int k = c.k();
  CocycleTable out = CocycleTable::trivial(base, k);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t st = base.product(s, t);
      std::vector<int> phase = c.at(s, t);
      for (int y : base[st].domain().atoms()) {
        const auto yi = static_cast<std::size_t>(y);
        phase[yi] = mod(phase[yi] + b[s][static_cast<std::size_t>(base[t](y))] + b[t][yi] - b[st][yi], k);
      }
      out.set(s, t, std::move(phase));
    }
  return out;
}

Cochain cochain_from_pairs(const FiniteInverseMonoid& base, const std::vector<std::vector<int>>& beta) {
  Cochain out;
  out.reserve(base.size());
  for (const auto& t : base.elements()) {
    std::vector<int> phase(static_cast<std::size_t>(base.atom_count()), 0);
    for (int y : t.domain().atoms())
      if (t(y) != y) phase[static_cast<std::size_t>(y)] = beta[static_cast<std::size_t>(t(y))][static_cast<std::size_t>(y)];
    out.push_back(std::move(phase));
  }
  return out;
}

std::optional<Cochain> cohomologous(const FiniteInverseMonoid& base, const CocycleTable& c1, const CocycleTable& c2,
                                    std::size_t guard) {
  if (c1.k() != c2.k()) throw DomainError("cocycles have different phase orders");
  require_singleton_atoms(base);
  const int n = base.atom_count();
  const int k = c1.k();
  std::vector<std::pair<int, int>> pairs;
  for (const auto& s : base.elements())
    if (s.rank() == 1) {
      const int y = s.domain().atoms().front();
      if (s(y) != y) pairs.emplace_back(s(y), y);
    }
  bounded_power(k, pairs.size(), guard, "coboundary search space");

  const std::size_t m = base.size();
  std::vector<int> digits(pairs.size(), 0);
  std::vector<std::vector<int>> beta(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  do {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      beta[static_cast<std::size_t>(pairs[i].first)][static_cast<std::size_t>(pairs[i].second)] = digits[i];
    const auto b = cochain_from_pairs(base, beta);
    bool match = true;
    for (std::size_t s = 0; s < m && match; ++s)
      for (std::size_t t = 0; t < m && match; ++t) {
        const std::size_t st = base.product(s, t);
        const auto& e1 = c1.at(s, t);
        const auto& e2 = c2.at(s, t);
        for (int y : base[st].domain().atoms()) {
          const auto yi = static_cast<std::size_t>(y);
          const int rhs = e1[yi] + b[s][static_cast<std::size_t>(base[t](y))] + b[t][yi] - b[st][yi];
          if (mod(e2[yi] - rhs, k) != 0) {
            match = false;
            break;
          }
        }
      }
    if (match) return b;
  } while (advance(digits, k));
  return std::nullopt;
}

std::optional<Cochain> is_trivial(const FiniteInverseMonoid& base, const CocycleTable& c, std::size_t guard) {
  return cohomologous(base, CocycleTable::trivial(base, c.k()), c, guard);
}

std::vector<CocycleTable> enumerate_cocycles_raw(const FiniteInverseMonoid& base, int k, std::size_t guard) {
  const std::size_t m = base.size();
  struct Slot {
    std::size_t s, t;
    int atom;
  };
  std::vector<Slot> slots;
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) {
      if (base.is_idempotent(s) || base.is_idempotent(t)) continue;
      for (int y : base[base.product(s, t)].domain().atoms()) slots.push_back({s, t, y});
    }
  bounded_power(k, slots.size(), guard, "raw cocycle search space");

  std::vector<CocycleTable> out;
  std::vector<int> digits(slots.size(), 0);
  do {
    CocycleTable c = CocycleTable::trivial(base, k);
    std::vector<int> phase(static_cast<std::size_t>(base.atom_count()), 0);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const bool first = i == 0 || slots[i - 1].s != slots[i].s || slots[i - 1].t != slots[i].t;
      if (first) std::fill(phase.begin(), phase.end(), 0);
      phase[static_cast<std::size_t>(slots[i].atom)] = digits[i];
      const bool last = i + 1 == slots.size() || slots[i + 1].s != slots[i].s || slots[i + 1].t != slots[i].t;
      if (last) c.set(slots[i].s, slots[i].t, phase);
    }
    if (validate_cocycle(base, c).pass) out.push_back(std::move(c));
  } while (advance(digits, k));
  return out;
}

std::vector<CocycleTable> enumerate_cocycles_germs(const FiniteInverseMonoid& base, int k, std::size_t guard) {
  require_singleton_atoms(base);
  const int n = base.atom_count();
  const auto triples = germ_triples(base);
  bounded_power(k, triples.size(), guard, "germ cocycle search space");
  const auto cell = [n](int x, int z, int y) {
    return (static_cast<std::size_t>(x) * static_cast<std::size_t>(n) + static_cast<std::size_t>(z)) *
               static_cast<std::size_t>(n) +
           static_cast<std::size_t>(y);
  };
  const auto nn = static_cast<std::size_t>(n);

  // The groupoid cocycle identity on 4-chains is a cheap necessary condition.
  auto groupoid_identity = [&](const std::vector<int>& gamma) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          for (int w = 0; w < n; ++w) {
            const int lhs = gamma[cell(y, z, w)] + gamma[cell(x, y, w)];
            const int rhs = gamma[cell(x, y, z)] + gamma[cell(x, z, w)];
            if (mod(lhs - rhs, k) != 0) return false;
          }
    return true;
  };

  std::vector<CocycleTable> out;
  std::vector<int> digits(triples.size(), 0);
  std::vector<int> gamma(nn * nn * nn, 0);
  do {
    std::fill(gamma.begin(), gamma.end(), 0);
    for (std::size_t i = 0; i < triples.size(); ++i) gamma[cell(triples[i].x, triples[i].z, triples[i].y)] = digits[i];
    if (!groupoid_identity(gamma)) continue;
    CocycleTable c = CocycleTable::trivial(base, k);
    for (std::size_t s = 0; s < base.size(); ++s)
      for (std::size_t t = 0; t < base.size(); ++t) {
        if (!c.required(s, t)) continue;
        std::vector<int> phase(nn, 0);
        for (int y : base[base.product(s, t)].domain().atoms()) {
          const int z = base[t](y);
          phase[static_cast<std::size_t>(y)] = gamma[cell(base[s](z), z, y)];
        }
        c.set(s, t, std::move(phase));
      }
    if (validate_cocycle(base, c).pass) out.push_back(std::move(c));
  } while (advance(digits, k));
  return out;
}

PhasedElement apply_equivalence(const Extension& ext1, const EquivalenceWitness& witness, const PhasedElement& v) {
  const auto& pi = witness.atom_permutation;
  const int n = ext1.atom_count();
  const std::size_t si = ext1.base().require_index(v.bijection);
  std::vector<int> image(static_cast<std::size_t>(n), PartialBijection::kUndefined);
  std::vector<int> phase(static_cast<std::size_t>(n), 0);
  for (int y : v.bijection.domain().atoms()) {
    const auto yi = static_cast<std::size_t>(y);
    image[static_cast<std::size_t>(pi[yi])] = pi[static_cast<std::size_t>(v.bijection(y))];
    phase[static_cast<std::size_t>(pi[yi])] = mod(v.phase[yi] + witness.coboundary[si][yi], ext1.k());
  }
  return PhasedElement(PartialBijection(n, std::move(image)), std::move(phase));
}

std::optional<EquivalenceWitness> extensions_equivalent(const Extension& ext1, const Extension& ext2,
                                                        std::size_t guard) {
  const auto& s1 = ext1.base();
  const auto& s2 = ext2.base();
  if (s1.size() != s2.size() || s1.atom_count() != s2.atom_count() || ext1.k() != ext2.k()) return std::nullopt;
  if (s1.size() > guard)
    throw SizeGuardError("|S| = " + std::to_string(s1.size()) + " exceeds the equivalence guard of " +
                         std::to_string(guard));
  const int n = s1.atom_count();
  const std::size_t m = s1.size();
  std::vector<int> pi(static_cast<std::size_t>(n));
  std::iota(pi.begin(), pi.end(), 0);
  do {
    std::vector<std::size_t> theta(m);
    bool maps_onto = true;
    for (std::size_t i = 0; i < m && maps_onto; ++i) {
      std::vector<int> image(static_cast<std::size_t>(n), PartialBijection::kUndefined);
      for (int y : s1[i].domain().atoms())
        image[static_cast<std::size_t>(pi[static_cast<std::size_t>(y)])] = pi[static_cast<std::size_t>(s1[i](y))];
      const auto idx = s2.index_of(PartialBijection(n, std::move(image)));
      if (!idx) maps_onto = false;
      else theta[i] = *idx;
    }
    if (!maps_onto) continue;

    CocycleTable pulled = CocycleTable::trivial(s1, ext1.k());
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t t = 0; t < m; ++t) {
        const auto& entry = ext2.cocycle().at(theta[s], theta[t]);
        std::vector<int> phase(static_cast<std::size_t>(n), 0);
        for (int y = 0; y < n; ++y) phase[static_cast<std::size_t>(y)] = entry[static_cast<std::size_t>(pi[static_cast<std::size_t>(y)])];
        pulled.set(s, t, std::move(phase));
      }
    if (auto b = cohomologous(s1, pulled, ext1.cocycle())) return EquivalenceWitness{pi, std::move(*b)};
  } while (std::next_permutation(pi.begin(), pi.end()));
  return std::nullopt;
}

}  // namespace cartanlab
