#include "cartanlab/phased.hpp"

#include <algorithm>
#include <unordered_set>

#include "cartanlab/errors.hpp"

namespace cartanlab {

int mod(int value, int k) {
  const int r = value % k;
  return r < 0 ? r + k : r;
}

PhasedElement::PhasedElement(PartialBijection s, std::vector<int> phases)
    : bijection(std::move(s)), phase(std::move(phases)) {
  if (phase.size() != static_cast<std::size_t>(bijection.atom_count()))
    throw StructuralError("phase array length does not match atom count");
  for (int a = 0; a < bijection.atom_count(); ++a)
    if (!bijection.domain().contains(a)) phase[static_cast<std::size_t>(a)] = 0;
}

PhasedElement PhasedElement::lift(PartialBijection s) {
  const auto n = static_cast<std::size_t>(s.atom_count());
  return PhasedElement(std::move(s), std::vector<int>(n, 0));
}

std::vector<int> PhasedElement::domain_phases() const {
  std::vector<int> out;
  for (int a : bijection.domain().atoms()) out.push_back(phase[static_cast<std::size_t>(a)]);
  return out;
}

std::string PhasedElement::to_string() const {
  std::string out = "(" + bijection.to_string() + ", [";
  bool first = true;
  for (int p : domain_phases()) {
    if (!first) out += ",";
    out += std::to_string(p);
    first = false;
  }
  return out + "])";
}

MunnQuotient munn_quotient(std::span<const PhasedElement> elements, const PhasedOps& ops) {
  std::unordered_set<PhasedElement> set(elements.begin(), elements.end());
  for (const auto& v : elements) {
    if (!set.contains(ops.dagger(v))) throw ClosureError("not closed under dagger: " + v.to_string());
    for (const auto& w : elements)
      if (!set.contains(ops.multiply(v, w)))
        throw ClosureError("not closed under product: witness (" + v.to_string() + ", " + w.to_string() + ")");
  }

  std::vector<PhasedElement> idempotents;
  for (const auto& v : elements)
    if (ops.multiply(v, v) == v) idempotents.push_back(v);
  std::sort(idempotents.begin(), idempotents.end());
  idempotents.erase(std::unique(idempotents.begin(), idempotents.end()), idempotents.end());

  // f <= e in E(G) iff f = e f.
  std::vector<PhasedElement> atoms;
  for (const auto& e : idempotents) {
    if (e.bijection.is_zero()) continue;
    const bool minimal = std::none_of(idempotents.begin(), idempotents.end(), [&](const PhasedElement& f) {
      return !f.bijection.is_zero() && f != e && ops.multiply(e, f) == f;
    });
    if (minimal) atoms.push_back(e);
  }
  const int atom_count = static_cast<int>(atoms.size());
  if (atom_count > kMaxAtoms) throw SizeGuardError("too many minimal idempotents for the quotient");

  auto atom_of = [&](const PhasedElement& e) -> int {
    if (e.bijection.is_zero()) return PartialBijection::kUndefined;
    auto it = std::find(atoms.begin(), atoms.end(), e);
    if (it == atoms.end()) throw InvariantViolation("conjugate of an atom is not an atom: " + e.to_string());
    return static_cast<int>(it - atoms.begin());
  };

  std::vector<PartialBijection> images;
  images.reserve(elements.size());
  for (const auto& v : elements) {
    const auto vd = ops.dagger(v);
    std::vector<int> image(static_cast<std::size_t>(atom_count), PartialBijection::kUndefined);
    for (int a = 0; a < atom_count; ++a)
      image[static_cast<std::size_t>(a)] = atom_of(ops.multiply(ops.multiply(v, atoms[static_cast<std::size_t>(a)]), vd));
    images.emplace_back(atom_count, std::move(image));
  }

  MunnQuotient out{FiniteInverseMonoid::from_elements(atom_count, images), {}, atoms};
  out.quotient_map.reserve(images.size());
  for (const auto& s : images) out.quotient_map.push_back(out.monoid.require_index(s));
  return out;
}

}  // namespace cartanlab
