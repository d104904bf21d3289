#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cartanlab/atom_set.hpp"

namespace cartanlab {

/// An injective partial map on the atoms {0, ..., n-1}; an element of the
/// symmetric inverse monoid I_n.
///
/// Canonical order: by domain bitset as an integer, then by the image array
/// lexicographically. Values are immutable once built.
class PartialBijection {
 public:
  static constexpr int kUndefined = -1;

  PartialBijection() = default;

  /// Builds from a full-length image array, `kUndefined` marking atoms outside
  /// the domain. Throws StructuralError if the map is not injective or out of
  /// range.
  PartialBijection(int atom_count, std::vector<int> image);

  static PartialBijection zero(int atom_count);
  static PartialBijection identity(int atom_count);
  static PartialBijection partial_identity(int atom_count, AtomSet support);
  /// The one-point map from -> to.
  static PartialBijection singleton(int atom_count, int from, int to);

  int atom_count() const { return n_; }
  AtomSet domain() const { return domain_; }
  AtomSet range() const { return range_; }
  /// Image of `atom`, or kUndefined.
  int operator()(int atom) const { return image_[static_cast<std::size_t>(atom)]; }
  const std::vector<int>& image() const { return image_; }

  bool is_zero() const { return domain_.empty(); }
  /// True for partial identities, i.e. the idempotents of I_n.
  bool is_idempotent() const;
  std::size_t rank() const { return static_cast<std::size_t>(domain_.count()); }

  /// Compact textual form: image over atoms, '-' for undefined, e.g. "[1-]".
  std::string to_string() const;

  std::strong_ordering operator<=>(const PartialBijection& other) const;
  bool operator==(const PartialBijection& other) const = default;

 private:
  int n_ = 0;
  AtomSet domain_;
  AtomSet range_;
  std::vector<int> image_;
};

/// s after t: domain t^-1(range t ∩ dom s), y -> s(t(y)).
PartialBijection compose(const PartialBijection& s, const PartialBijection& t);
PartialBijection dagger(const PartialBijection& s);
/// s <= t iff s is a restriction of t.
bool natural_leq(const PartialBijection& s, const PartialBijection& t);
/// Restriction of s to a subset of its domain.
PartialBijection restrict(const PartialBijection& s, AtomSet subset);

struct MeetResult {
  PartialBijection meet;
  /// The fixed-point idempotent s†t ∧ 1.
  PartialBijection fixed_point_idempotent;
};

/// s ∧ t as the restriction to the agreement set, together with s†t ∧ 1.
/// Throws InvariantViolation if the Leech identities fail.
MeetResult meet_with_witness(const PartialBijection& s, const PartialBijection& t);
PartialBijection meet(const PartialBijection& s, const PartialBijection& t);

/// Disjoint domains and disjoint ranges (equivalently s†t = ts† = 0).
bool orthogonal(const PartialBijection& s, const PartialBijection& t);

/// Union of a pairwise orthogonal family; zero of `atom_count` for an empty
/// family. Throws OrthogonalityError naming the first offending pair.
PartialBijection orthogonal_join(std::span<const PartialBijection> family, int atom_count);

/// s restricted to dom(s) \ dom(t), written s \ t.
PartialBijection relative_complement(const PartialBijection& s, const PartialBijection& t);

void require_same_atoms(const PartialBijection& s, const PartialBijection& t);

}  // namespace cartanlab

template <>
struct std::hash<cartanlab::PartialBijection> {
  std::size_t operator()(const cartanlab::PartialBijection& s) const noexcept;
};
