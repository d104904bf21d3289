#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cartanlab/inverse_monoid.hpp"
#include "cartanlab/partial_bijection.hpp"

namespace cartanlab {

/// A partial bijection carrying a phase exponent (mod k) on each domain atom:
/// the pair [s, p] of an element of an extension G.
///
/// `phase` has one entry per atom; entries outside the domain are kept at 0 so
/// that equality and ordering only see domain phases.
struct PhasedElement {
  PartialBijection bijection;
  std::vector<int> phase;

  PhasedElement() = default;
  PhasedElement(PartialBijection s, std::vector<int> phases);
  /// Zero phases on the domain of `s`.
  static PhasedElement lift(PartialBijection s);

  /// Phases restricted to the domain, in increasing atom order.
  std::vector<int> domain_phases() const;
  /// Identity bijection part on its domain: a member of P.
  bool is_phased_idempotent() const { return bijection.is_idempotent(); }
  std::string to_string() const;

  auto operator<=>(const PhasedElement&) const = default;
};

int mod(int value, int k);

/// Product and dagger of a concrete finite monoid of phased elements.
struct PhasedOps {
  std::function<PhasedElement(const PhasedElement&, const PhasedElement&)> multiply;
  std::function<PhasedElement(const PhasedElement&)> dagger;
};

struct MunnQuotient {
  FiniteInverseMonoid monoid;
  /// quotient_map[i] is the index in `monoid` of the image of G[i].
  std::vector<std::size_t> quotient_map;
  /// The minimal nonzero idempotents of G used as the atoms of the quotient.
  std::vector<PhasedElement> atom_idempotents;
};

/// G / Munn congruence, realized through the conjugation action v e v† on the
/// minimal nonzero idempotents of G. Throws ClosureError if G is not closed.
MunnQuotient munn_quotient(std::span<const PhasedElement> elements, const PhasedOps& ops);

}  // namespace cartanlab

template <>
struct std::hash<cartanlab::PhasedElement> {
  std::size_t operator()(const cartanlab::PhasedElement& v) const noexcept {
    std::size_t h = std::hash<cartanlab::PartialBijection>{}(v.bijection);
    for (int p : v.phase) h = h * 31U ^ static_cast<std::size_t>(p);
    return h;
  }
};
