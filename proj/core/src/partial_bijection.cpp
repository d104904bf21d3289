#include "cartanlab/partial_bijection.hpp"

#include <algorithm>
#include <sstream>

#include "cartanlab/errors.hpp"

namespace cartanlab {

PartialBijection::PartialBijection(int atom_count, std::vector<int> image)
    : n_(atom_count), image_(std::move(image)) {
  if (n_ < 0 || n_ > kMaxAtoms) throw StructuralError("atom count out of range: " + std::to_string(n_));
  if (image_.size() != static_cast<std::size_t>(n_))
    throw StructuralError("image array length " + std::to_string(image_.size()) +
                          " does not match atom count " + std::to_string(n_));
  for (int a = 0; a < n_; ++a) {
    const int b = image_[static_cast<std::size_t>(a)];
    if (b == kUndefined) continue;
    if (b < 0 || b >= n_) throw StructuralError("atom " + std::to_string(b) + " out of range");
    if (range_.contains(b))
      throw StructuralError("map is not injective: atom " + std::to_string(b) + " hit twice");
    domain_.insert(a);
    range_.insert(b);
  }
}

PartialBijection PartialBijection::zero(int atom_count) {
  return PartialBijection(atom_count, std::vector<int>(static_cast<std::size_t>(atom_count), kUndefined));
}

PartialBijection PartialBijection::identity(int atom_count) {
  return partial_identity(atom_count, AtomSet::full(atom_count));
}

PartialBijection PartialBijection::partial_identity(int atom_count, AtomSet support) {
  std::vector<int> image(static_cast<std::size_t>(atom_count), kUndefined);
  for (int a : support.atoms()) image[static_cast<std::size_t>(a)] = a;
  return PartialBijection(atom_count, std::move(image));
}

PartialBijection PartialBijection::singleton(int atom_count, int from, int to) {
  std::vector<int> image(static_cast<std::size_t>(atom_count), kUndefined);
  image.at(static_cast<std::size_t>(from)) = to;
  return PartialBijection(atom_count, std::move(image));
}

bool PartialBijection::is_idempotent() const {
  for (int a : domain_.atoms())
    if (image_[static_cast<std::size_t>(a)] != a) return false;
  return true;
}

std::string PartialBijection::to_string() const {
  std::string out = "[";
  for (int a = 0; a < n_; ++a) {
    if (a > 0 && n_ > 10) out += ' ';
    const int b = image_[static_cast<std::size_t>(a)];
    out += b == kUndefined ? std::string("-") : std::to_string(b);
  }
  out += "]";
  return out;
}

std::strong_ordering PartialBijection::operator<=>(const PartialBijection& other) const {
  if (auto c = n_ <=> other.n_; c != 0) return c;
  if (auto c = domain_.bits() <=> other.domain_.bits(); c != 0) return c;
  return image_ <=> other.image_;
}

void require_same_atoms(const PartialBijection& s, const PartialBijection& t) {
  if (s.atom_count() != t.atom_count())
    throw StructuralError("atom-set mismatch: " + std::to_string(s.atom_count()) + " vs " +
                          std::to_string(t.atom_count()));
}

PartialBijection compose(const PartialBijection& s, const PartialBijection& t) {
  require_same_atoms(s, t);
  const int n = s.atom_count();
  std::vector<int> image(static_cast<std::size_t>(n), PartialBijection::kUndefined);
  for (int y : t.domain().atoms()) {
    const int mid = t(y);
    if (s.domain().contains(mid)) image[static_cast<std::size_t>(y)] = s(mid);
  }
  return PartialBijection(n, std::move(image));
}

PartialBijection dagger(const PartialBijection& s) {
  const int n = s.atom_count();
  std::vector<int> image(static_cast<std::size_t>(n), PartialBijection::kUndefined);
  for (int y : s.domain().atoms()) image[static_cast<std::size_t>(s(y))] = y;
  return PartialBijection(n, std::move(image));
}

bool natural_leq(const PartialBijection& s, const PartialBijection& t) {
  require_same_atoms(s, t);
  if (!s.domain().subset_of(t.domain())) return false;
  for (int y : s.domain().atoms())
    if (s(y) != t(y)) return false;
  return true;
}

PartialBijection restrict(const PartialBijection& s, AtomSet subset) {
  std::vector<int> image(static_cast<std::size_t>(s.atom_count()), PartialBijection::kUndefined);
  for (int y : (s.domain() & subset).atoms()) image[static_cast<std::size_t>(y)] = s(y);
  return PartialBijection(s.atom_count(), std::move(image));
}

MeetResult meet_with_witness(const PartialBijection& s, const PartialBijection& t) {
  require_same_atoms(s, t);
  AtomSet agree;
  for (int y : (s.domain() & t.domain()).atoms())
    if (s(y) == t(y)) agree.insert(y);
  PartialBijection m = restrict(s, agree);

  // s†t ∧ 1 is the partial identity on the fixed points of s†t.
  const PartialBijection st = compose(dagger(s), t);
  AtomSet fixed;
  for (int y : st.domain().atoms())
    if (st(y) == y) fixed.insert(y);
  PartialBijection f = PartialBijection::partial_identity(s.atom_count(), fixed);

  if (compose(s, f) != m || compose(t, f) != m || compose(dagger(m), m) != f)
    throw InvariantViolation("Leech identity failed for " + s.to_string() + " and " + t.to_string());
  return {std::move(m), std::move(f)};
}

PartialBijection meet(const PartialBijection& s, const PartialBijection& t) {
  return meet_with_witness(s, t).meet;
}

bool orthogonal(const PartialBijection& s, const PartialBijection& t) {
  require_same_atoms(s, t);
  return s.domain().disjoint(t.domain()) && s.range().disjoint(t.range());
}

PartialBijection orthogonal_join(std::span<const PartialBijection> family, int atom_count) {
  std::vector<int> image(static_cast<std::size_t>(atom_count), PartialBijection::kUndefined);
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i].atom_count() != atom_count)
      throw StructuralError("atom-set mismatch in join family at position " + std::to_string(i));
    for (std::size_t j = 0; j < i; ++j) {
      if (!orthogonal(family[j], family[i]))
        throw OrthogonalityError("elements " + std::to_string(j) + " (" + family[j].to_string() + ") and " +
                                     std::to_string(i) + " (" + family[i].to_string() +
                                     ") are not orthogonal",
                                 j, i);
    }
    for (int y : family[i].domain().atoms()) image[static_cast<std::size_t>(y)] = family[i](y);
  }
  return PartialBijection(atom_count, std::move(image));
}

PartialBijection relative_complement(const PartialBijection& s, const PartialBijection& t) {
  require_same_atoms(s, t);
  return restrict(s, s.domain().minus(t.domain()));
}

}  // namespace cartanlab

std::size_t std::hash<cartanlab::PartialBijection>::operator()(
    const cartanlab::PartialBijection& s) const noexcept {
  std::size_t h = std::hash<std::uint64_t>{}(s.domain().bits());
  for (int v : s.image()) h = h * 1000003U ^ static_cast<std::size_t>(v + 2);
  return h;
}
