#pragma once

#include <vector>

#include "cartanlab/inverse_monoid.hpp"

namespace cartanlab {

/// All partial injections on n atoms, |I_n| = sum_d C(n,d)^2 d!.
FiniteInverseMonoid rook_monoid(int n);
/// The elements of I_n without building the product table.
std::vector<PartialBijection> rook_elements(int n);

/// All partial injections whose graph stays inside the blocks of `partition`
/// (the full inverse monoid of the equivalence relation it defines).
/// Throws DomainError unless the blocks partition {0, ..., n-1}.
FiniteInverseMonoid equivalence_monoid(const std::vector<std::vector<int>>& partition);

/// E(I_n) alone: all partial identities on n atoms.
FiniteInverseMonoid diagonal_monoid(int n);

/// Disjoint-union monoid on atoms(a) + atoms(b): pairs (s, t) acting as s on
/// the first block and t shifted onto the second.
FiniteInverseMonoid disjoint_union(const FiniteInverseMonoid& a, const FiniteInverseMonoid& b);

}  // namespace cartanlab
