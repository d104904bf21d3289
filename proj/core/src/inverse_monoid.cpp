#include "cartanlab/inverse_monoid.hpp"

#include <algorithm>
#include <unordered_set>

#include "cartanlab/errors.hpp"

namespace cartanlab {

namespace {

std::vector<PartialBijection> sorted_unique(std::vector<PartialBijection> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct ActionHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = 0;
    for (auto x : v) h = h * 1000003U ^ std::hash<std::uint64_t>{}(x);
    return h;
  }
};

}  // namespace

FiniteInverseMonoid FiniteInverseMonoid::from_elements(int atom_count, std::vector<PartialBijection> elements) {
  for (const auto& s : elements)
    if (s.atom_count() != atom_count)
      throw StructuralError("element " + s.to_string() + " is over " + std::to_string(s.atom_count()) +
                            " atoms, expected " + std::to_string(atom_count));
  FiniteInverseMonoid m;
  m.atom_count_ = atom_count;
  const auto zero = PartialBijection::zero(atom_count);
  const auto one = PartialBijection::identity(atom_count);
  m.added_zero_ = std::find(elements.begin(), elements.end(), zero) == elements.end();
  m.added_unit_ = std::find(elements.begin(), elements.end(), one) == elements.end();
  if (m.added_zero_) elements.push_back(zero);
  if (m.added_unit_) elements.push_back(one);
  m.elements_ = sorted_unique(std::move(elements));

  const std::size_t n = m.elements_.size();
  m.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) m.index_.emplace(m.elements_[i], i);

  m.table_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto p = compose(m.elements_[i], m.elements_[j]);
      auto it = m.index_.find(p);
      if (it == m.index_.end())
        throw ClosureError("not closed under product: " + m.elements_[i].to_string() + " * " +
                           m.elements_[j].to_string() + " = " + p.to_string() + " is missing");
      m.table_[i * n + j] = it->second;
    }
  }
  m.dagger_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = dagger(m.elements_[i]);
    auto it = m.index_.find(d);
    if (it == m.index_.end())
      throw ClosureError("not closed under dagger: " + m.elements_[i].to_string() + "† = " + d.to_string() +
                         " is missing");
    m.dagger_[i] = it->second;
    if (m.elements_[i].is_idempotent()) m.idempotents_.push_back(i);
  }
  m.zero_ = m.index_.at(zero);
  m.unit_ = m.index_.at(one);
  return m;
}

FiniteInverseMonoid FiniteInverseMonoid::generated_by(int atom_count, std::span<const PartialBijection> generators,
                                                      std::size_t guard) {
  std::vector<PartialBijection> all = {PartialBijection::zero(atom_count), PartialBijection::identity(atom_count)};
  std::unordered_set<PartialBijection> seen(all.begin(), all.end());
  auto push = [&](PartialBijection s) {
    if (seen.insert(s).second) {
      all.push_back(std::move(s));
      if (all.size() > guard)
        throw SizeGuardError("generated monoid exceeds guard of " + std::to_string(guard) + " elements");
    }
  };
  for (const auto& g : generators) {
    push(g);
    push(dagger(g));
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      push(compose(all[i], all[j]));
      push(compose(all[j], all[i]));
    }
  return from_elements(atom_count, std::move(all));
}

std::optional<std::size_t> FiniteInverseMonoid::index_of(const PartialBijection& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteInverseMonoid::require_index(const PartialBijection& s) const {
  auto i = index_of(s);
  if (!i) throw DomainError("element " + s.to_string() + " is not in the monoid");
  return *i;
}

ClassificationReport classify(int atom_count, std::span<const PartialBijection> elements) {
  std::unordered_set<PartialBijection> set;
  for (const auto& s : elements) {
    if (s.atom_count() != atom_count) throw StructuralError("element " + s.to_string() + " has wrong atom count");
    set.insert(s);
  }
  for (const auto& s : set) {
    if (!set.contains(dagger(s)))
      throw ClosureError("not closed under dagger: witness (" + s.to_string() + ", " + dagger(s).to_string() + ")");
    for (const auto& t : set) {
      auto st = compose(s, t);
      if (!set.contains(st))
        throw ClosureError("not closed under product: witness (" + s.to_string() + ", " + t.to_string() + ", " +
                           st.to_string() + ")");
    }
  }

  ClassificationReport report;
  report.inverse_monoid = set.contains(PartialBijection::identity(atom_count));
  report.element_count = set.size();
  std::vector<PartialBijection> sorted(set.begin(), set.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& s : sorted)
    if (s.is_idempotent()) report.idempotents.push_back(s);

  // Munn action e -> s e s† on E(S); fundamental iff it is injective on S.
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, ActionHash> actions;
  report.fundamental = true;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& s = sorted[i];
    const auto sd = dagger(s);
    std::vector<std::uint64_t> action;
    action.reserve(report.idempotents.size());
    for (const auto& e : report.idempotents) action.push_back(compose(compose(s, e), sd).domain().bits());
    auto [it, inserted] = actions.emplace(std::move(action), i);
    if (!inserted && report.fundamental) {
      report.fundamental = false;
      report.non_fundamental_witness = std::make_pair(sorted[it->second], s);
    }
  }

  report.centralizer_is_idempotents = true;
  for (const auto& s : sorted) {
    bool central = std::all_of(report.idempotents.begin(), report.idempotents.end(),
                               [&](const PartialBijection& e) { return compose(s, e) == compose(e, s); });
    if (central && !s.is_idempotent()) report.centralizer_is_idempotents = false;
  }

  report.clifford = std::all_of(sorted.begin(), sorted.end(), [](const PartialBijection& s) {
    return compose(dagger(s), s) == compose(s, dagger(s));
  });
  return report;
}

ClassificationReport classify(const FiniteInverseMonoid& monoid) {
  return classify(monoid.atom_count(), monoid.elements());
}

}  // namespace cartanlab
