#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace cartanlab {

/// Maximum number of atoms a single monoid can be realized on.
inline constexpr int kMaxAtoms = 64;

/// A subset of the atoms {0, ..., n-1}, stored as a 64-bit mask.
///
/// Atoms are the characters of the finite Boolean algebra of idempotents, so an
/// AtomSet is exactly the support of an idempotent.
class AtomSet {
 public:
  constexpr AtomSet() = default;
  constexpr explicit AtomSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr AtomSet full(int n) {
    return AtomSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr AtomSet single(int atom) { return AtomSet(std::uint64_t{1} << atom); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int atom) const { return (bits_ >> atom) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  int count() const { return std::popcount(bits_); }
  constexpr bool subset_of(AtomSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(AtomSet other) const { return (bits_ & other.bits_) == 0; }

  constexpr void insert(int atom) { bits_ |= std::uint64_t{1} << atom; }
  constexpr void erase(int atom) { bits_ &= ~(std::uint64_t{1} << atom); }

  constexpr AtomSet operator&(AtomSet o) const { return AtomSet(bits_ & o.bits_); }
  constexpr AtomSet operator|(AtomSet o) const { return AtomSet(bits_ | o.bits_); }
  constexpr AtomSet minus(AtomSet o) const { return AtomSet(bits_ & ~o.bits_); }

  /// Atoms in increasing order.
  std::vector<int> atoms() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  std::string to_string(int n) const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int a = 0; a < n; ++a)
      if (contains(a)) s[static_cast<std::size_t>(a)] = '1';
    return s;
  }

  constexpr auto operator<=>(const AtomSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace cartanlab
