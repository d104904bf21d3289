#include "cartanlab/generators.hpp"

#include <numeric>

#include "cartanlab/errors.hpp"

namespace cartanlab {

namespace {

// Extends `image` over atoms [atom, n) choosing targets within `allowed[atom]`.
void extend_injections(int atom, int n, const std::vector<AtomSet>& allowed, AtomSet used, std::vector<int>& image,
                       std::vector<PartialBijection>& out) {
  if (atom == n) {
    out.emplace_back(n, image);
    return;
  }
  image[static_cast<std::size_t>(atom)] = PartialBijection::kUndefined;
  extend_injections(atom + 1, n, allowed, used, image, out);
  for (int b : allowed[static_cast<std::size_t>(atom)].minus(used).atoms()) {
    image[static_cast<std::size_t>(atom)] = b;
    AtomSet next = used;
    next.insert(b);
    extend_injections(atom + 1, n, allowed, next, image, out);
  }
  image[static_cast<std::size_t>(atom)] = PartialBijection::kUndefined;
}

std::vector<PartialBijection> injections_within(int n, const std::vector<AtomSet>& allowed) {
  std::vector<PartialBijection> out;
  std::vector<int> image(static_cast<std::size_t>(n), PartialBijection::kUndefined);
  extend_injections(0, n, allowed, AtomSet{}, image, out);
  return out;
}

}  // namespace

std::vector<PartialBijection> rook_elements(int n) {
  if (n < 1 || n > 8) throw DomainError("rook monoid size out of range: " + std::to_string(n));
  auto out = injections_within(n, std::vector<AtomSet>(n, AtomSet::full(n)));
  std::sort(out.begin(), out.end());
  return out;
}

FiniteInverseMonoid rook_monoid(int n) { return FiniteInverseMonoid::from_elements(n, rook_elements(n)); }

FiniteInverseMonoid equivalence_monoid(const std::vector<std::vector<int>>& partition) {
  int n = 0;
  for (const auto& block : partition) n += static_cast<int>(block.size());
  if (n < 1 || n > kMaxAtoms) throw DomainError("partition must cover between 1 and 64 atoms");
  std::vector<AtomSet> allowed(static_cast<std::size_t>(n));
  AtomSet covered;
  for (const auto& block : partition) {
    if (block.empty()) throw DomainError("partition has an empty block");
    AtomSet b;
    for (int a : block) {
      if (a < 0 || a >= n || covered.contains(a))
        throw DomainError("partition blocks must be disjoint and cover 0.." + std::to_string(n - 1));
      covered.insert(a);
      b.insert(a);
    }
    for (int a : block) allowed[static_cast<std::size_t>(a)] = b;
  }
  return FiniteInverseMonoid::from_elements(n, injections_within(n, allowed));
}

FiniteInverseMonoid diagonal_monoid(int n) {
  if (n < 1 || n > 20) throw DomainError("diagonal monoid size out of range: " + std::to_string(n));
  std::vector<PartialBijection> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits)
    out.push_back(PartialBijection::partial_identity(n, AtomSet(bits)));
  return FiniteInverseMonoid::from_elements(n, std::move(out));
}

FiniteInverseMonoid disjoint_union(const FiniteInverseMonoid& a, const FiniteInverseMonoid& b) {
  const int na = a.atom_count();
  const int n = na + b.atom_count();
  if (n > kMaxAtoms) throw DomainError("disjoint union exceeds 64 atoms");
  std::vector<PartialBijection> out;
  out.reserve(a.size() * b.size());
  for (const auto& s : a.elements())
    for (const auto& t : b.elements()) {
      std::vector<int> image(static_cast<std::size_t>(n), PartialBijection::kUndefined);
      for (int y : s.domain().atoms()) image[static_cast<std::size_t>(y)] = s(y);
      for (int y : t.domain().atoms()) image[static_cast<std::size_t>(na + y)] = na + t(y);
      out.emplace_back(n, std::move(image));
    }
  return FiniteInverseMonoid::from_elements(n, std::move(out));
}

}  // namespace cartanlab
