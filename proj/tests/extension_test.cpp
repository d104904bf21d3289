#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cartanlab/errors.hpp"
#include "cartanlab/extension.hpp"
#include "cartanlab/generators.hpp"
#include "support/oracles.hpp"

using namespace cartanlab;
using oracle::parse;

namespace {

std::size_t idx(const FiniteInverseMonoid& m, const char* images) { return m.require_index(parse(images)); }

PhasedElement phased(const char* images, std::vector<int> phase) { return PhasedElement(parse(images), phase); }

Extension perturbed(const FiniteInverseMonoid& m, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto b = oracle::random_cochain(m, k, rng);
  auto c = oracle::add_coboundary(m, CocycleTable::trivial(m, k), b);
  EXPECT_TRUE(oracle::cocycle_identity(m, c));
  return Extension(m, std::move(c));
}

bool valid_section(const SectionReport& r) { return r.order_preserving && r.idempotent_compatible && r.meet_preserving; }

}  // namespace

TEST(Cocycle, ZeroTablesPass) {
  const auto i2 = rook_monoid(2);
  EXPECT_TRUE(validate_cocycle(i2, CocycleTable::trivial(i2, 1)).pass);
  EXPECT_TRUE(validate_cocycle(i2, CocycleTable::trivial(i2, 2)).pass);
}

TEST(Cocycle, FlippedSwapEntryFails) {
  const auto i2 = rook_monoid(2);
  auto c = CocycleTable::trivial(i2, 2);
  const auto swap = idx(i2, "[10]");
  c.set(swap, swap, {1, 0});
  EXPECT_FALSE(oracle::cocycle_identity(i2, c));
  const auto report = validate_cocycle(i2, c);
  EXPECT_FALSE(report.pass);
  EXPECT_FALSE(report.identity);
  const bool witnessed = std::any_of(report.violations.begin(), report.violations.end(), [&](const auto& v) {
    return v.s == swap && v.t == swap && v.u == swap;
  });
  EXPECT_TRUE(witnessed);
}

TEST(Cocycle, MissingEntryIsFormatError) {
  const auto i2 = rook_monoid(2);
  const auto c = CocycleTable::empty(i2, 2);
  const auto swap = idx(i2, "[10]");
  EXPECT_TRUE(c.required(swap, swap));
  EXPECT_FALSE(c.required(swap, idx(i2, "[01]")));
  EXPECT_THROW(c.at(swap, swap), FormatError);
  EXPECT_THROW(validate_cocycle(i2, c), FormatError);
}

TEST(Cocycle, UnsupportedEntryFails) {
  const auto i2 = rook_monoid(2);
  auto c = CocycleTable::trivial(i2, 2);
  c.set(idx(i2, "[1-]"), idx(i2, "[-0]"), {1, 0});
  const auto report = validate_cocycle(i2, c);
  EXPECT_FALSE(report.supported);
}

TEST(Product, Examples) {
  const auto i2 = rook_monoid(2);
  const Extension ext(i2, CocycleTable::trivial(i2, 2));
  const auto w = phased("[1-]", {1, 0});
  EXPECT_EQ(ext.multiply(ext.unit(), w), w);
  EXPECT_EQ(ext.multiply(phased("[1-]", {1, 0}), phased("[-0]", {0, 1})), phased("[-1]", {0, 0}));
}

TEST(Product, MatchesTableAndIsAssociative) {
  const auto i2 = rook_monoid(2);
  const auto ext = perturbed(i2, 2, 3);
  const auto g = ext.elements();
  ASSERT_EQ(g.size(), 17U);
  for (const auto& u : g)
    for (const auto& v : g) {
      ASSERT_EQ(ext.multiply(u, v), oracle::twisted_product(ext, u, v));
      for (const auto& w : g) ASSERT_EQ(ext.multiply(ext.multiply(u, v), w), ext.multiply(u, ext.multiply(v, w)));
    }
}

TEST(Extension, Orders) {
  const auto i3 = rook_monoid(3);
  EXPECT_EQ(Extension(i3, CocycleTable::trivial(i3, 2)).order(), 139U);
  const auto block = equivalence_monoid({{0, 1}, {2}});
  EXPECT_EQ(Extension(block, CocycleTable::trivial(block, 2)).elements().size(), 51U);
  EXPECT_THROW(Extension(i3, CocycleTable::trivial(i3, 4)).elements(100), SizeGuardError);
}

TEST(Extension, QuotientMapAndIdempotentFibers) {
  const auto i2 = rook_monoid(2);
  const auto ext = perturbed(i2, 2, 5);
  const auto g = ext.elements();
  for (const auto& v : g) {
    ASSERT_EQ(i2.is_idempotent(i2.require_index(v.bijection)), v.is_phased_idempotent());
    ASSERT_EQ(ext.dagger(ext.dagger(v)), v);
    for (const auto& w : g) ASSERT_EQ(ext.multiply(v, w).bijection, compose(v.bijection, w.bijection));
  }
  for (const auto& s : i2.elements()) EXPECT_EQ(ext.fiber(s).size(), std::size_t{1} << s.rank());
}

TEST(Section, TrivialCocycleGivesZeroPhases) {
  const auto i3 = rook_monoid(3);
  const Extension ext(i3, CocycleTable::trivial(i3, 2));
  const auto j = order_preserving_section(ext);
  for (std::size_t s = 0; s < i3.size(); ++s) EXPECT_EQ(j[s], PhasedElement::lift(i3[s]));
}

TEST(Section, PerturbedCocyclesAllConditionsHold) {
  for (int n : {2, 3})
    for (int k : {1, 2, 4}) {
      const auto m = rook_monoid(n);
      const auto ext = perturbed(m, k, static_cast<std::uint64_t>(10 * n + k));
      const auto j = order_preserving_section(ext);
      const auto report = validate_section(ext, j);
      EXPECT_TRUE(report.all()) << n << " " << k;
      for (std::size_t s = 0; s < m.size(); ++s) {
        ASSERT_EQ(j[m.dagger_of(s)], ext.dagger(j[s]));
        for (std::size_t t = 0; t < m.size(); ++t)
          ASSERT_EQ(j[m.require_index(meet(m[s], m[t]))], ext.meet(j[s], j[t]));
      }
      EXPECT_EQ(j[m.unit_index()], ext.unit());
    }
}

TEST(Section, FlippedPhaseBreaksIdempotentCompatibility) {
  const auto i2 = rook_monoid(2);
  const Extension ext(i2, CocycleTable::trivial(i2, 2));
  auto j = order_preserving_section(ext);
  const auto t01 = idx(i2, "[1-]");
  j.set(t01, phased("[1-]", {1, 0}));
  const auto report = validate_section(ext, j);
  EXPECT_FALSE(report.idempotent_compatible);
  EXPECT_FALSE(report.witness_b.empty());
  EXPECT_TRUE(report.consistent());
}

TEST(Section, NotASectionIsDomainError) {
  const auto i2 = rook_monoid(2);
  const Extension ext(i2, CocycleTable::trivial(i2, 2));
  auto j = order_preserving_section(ext);
  j.set(idx(i2, "[1-]"), PhasedElement::lift(parse("[10]")));
  EXPECT_THROW(validate_section(ext, j), DomainError);
}

TEST(Section, NegatedSectionSatisfiesProductRuleButNotUnit) {
  // j'(s) = -j(s) satisfies j'(esf) = j'(e) j'(s) j'(f) while j'(1) = -1,
  // so the unit clause is what separates it from an order preserving section.
  const auto i2 = rook_monoid(2);
  const Extension ext(i2, CocycleTable::trivial(i2, 2));
  const auto base = order_preserving_section(ext);
  std::vector<PhasedElement> negated;
  for (const auto& v : base.values()) {
    auto w = v;
    for (int y : v.bijection.domain().atoms()) w.phase[static_cast<std::size_t>(y)] = (v.phase[static_cast<std::size_t>(y)] + 1) % 2;
    negated.push_back(w);
  }
  const Section j(negated);
  bool product_rule = true;
  for (std::size_t e : i2.idempotents())
    for (std::size_t s = 0; s < i2.size(); ++s)
      for (std::size_t f : i2.idempotents())
        product_rule = product_rule &&
                       j[i2.product(i2.product(e, s), f)] == ext.multiply(ext.multiply(j[e], j[s]), j[f]);
  EXPECT_TRUE(product_rule);
  EXPECT_NE(j[i2.unit_index()], ext.unit());
  const auto report = validate_section(ext, j);
  EXPECT_FALSE(report.idempotent_compatible);
  EXPECT_FALSE(report.order_preserving);
  EXPECT_FALSE(report.meet_preserving);
}

TEST(Section, RandomMutationsKeepConditionsEquivalent) {
  const auto i2 = rook_monoid(2);
  const auto ext = perturbed(i2, 2, 9);
  const auto good = order_preserving_section(ext);
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> pick(0, i2.size() - 1);
  std::bernoulli_distribution flip(0.5);
  int broken = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto j = good;
    const auto s = pick(rng);
    auto v = j[s];
    for (int y : v.bijection.domain().atoms())
      if (flip(rng)) v.phase[static_cast<std::size_t>(y)] ^= 1;
    j.set(s, v);
    const auto report = validate_section(ext, j);
    ASSERT_TRUE(report.consistent()) << trial;
    broken += valid_section(report) ? 0 : 1;
  }
  EXPECT_GT(broken, 0);
}

TEST(Lausch, AlphaSigmaDelta) {
  const auto i2 = rook_monoid(2);
  const auto ext = perturbed(i2, 2, 4);
  const auto j = order_preserving_section(ext);
  const auto g = ext.elements();
  for (std::size_t s = 0; s < i2.size(); ++s) {
    const auto ss = i2.product(i2.dagger_of(s), s);
    EXPECT_EQ(lausch_alpha(ext, j, s, ss), PhasedElement::lift(i2[ss]));
    for (std::size_t t = 0; t < i2.size(); ++t) ASSERT_EQ(sigma(ext, j, j[s], t), lausch_alpha(ext, j, s, t));
  }
  EXPECT_TRUE(delta(ext, j, j[idx(i2, "[10]")]).bijection.is_zero());
  for (const auto& v : g) {
    const auto d = delta(ext, j, v);
    ASSERT_TRUE(d.is_phased_idempotent() || d.bijection.is_zero());
    ASSERT_EQ(delta(ext, j, d), d);
    if (v.is_phased_idempotent()) {
      ASSERT_EQ(d, v);
    }
    for (std::size_t s = 0; s < i2.size(); ++s) {
      const auto qs = i2.product(i2.require_index(v.bijection), s);
      ASSERT_EQ(ext.multiply(v, j[s]), ext.multiply(j[qs], sigma(ext, j, v, s)));
      ASSERT_EQ(sigma(ext, j, v, s), sigma_from_germs(ext, j, v, s));
    }
    for (const auto& w : g) {
      ASSERT_EQ(delta(ext, j, ext.multiply(ext.multiply(ext.dagger(w), v), w)),
                ext.multiply(ext.multiply(ext.dagger(w), d), w));
      for (std::size_t s = 0; s < i2.size(); ++s) {
        const auto q2s = i2.product(i2.require_index(w.bijection), s);
        ASSERT_EQ(ext.multiply(sigma(ext, j, v, q2s), sigma(ext, j, w, s)), sigma(ext, j, ext.multiply(v, w), s));
      }
    }
  }
}

TEST(Cohomology, Reflexive) {
  const auto i2 = rook_monoid(2);
  const auto ext = perturbed(i2, 2, 1);
  const auto b = cohomologous(i2, ext.cocycle(), ext.cocycle());
  ASSERT_TRUE(b.has_value());
  for (const auto& row : *b) EXPECT_TRUE(std::all_of(row.begin(), row.end(), [](int p) { return p == 0; }));
}

TEST(Cohomology, EveryI2CocycleIsTrivial) {
  const auto i2 = rook_monoid(2);
  const auto raw = enumerate_cocycles_raw(i2, 2);
  const auto germs = enumerate_cocycles_germs(i2, 2);
  EXPECT_EQ(raw.size(), germs.size());
  for (const auto& c : raw) {
    ASSERT_TRUE(oracle::cocycle_identity(i2, c));
    ASSERT_TRUE(std::find(germs.begin(), germs.end(), c) != germs.end());
    const auto b = is_trivial(i2, c);
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(oracle::add_coboundary(i2, CocycleTable::trivial(i2, 2), *b), c);
  }
}

TEST(Cohomology, EveryI3CocycleIsTrivial) {
  const auto i3 = rook_monoid(3);
  const auto all = enumerate_cocycles_germs(i3, 2);
  EXPECT_FALSE(all.empty());
  for (const auto& c : all) {
    const auto b = is_trivial(i3, c);
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(oracle::add_coboundary(i3, CocycleTable::trivial(i3, 2), *b), c);
  }
}

TEST(Cohomology, RoundTripRandomCoboundaries) {
  std::mt19937_64 rng(77);
  for (int n : {2, 3})
    for (int k : {2, 3, 4}) {
      const auto m = rook_monoid(n);
      const auto target = oracle::add_coboundary(m, CocycleTable::trivial(m, k), oracle::random_cochain(m, k, rng));
      EXPECT_EQ(coboundary(m, k, *is_trivial(m, target)), target);
      const auto b = cohomologous(m, CocycleTable::trivial(m, k), target);
      ASSERT_TRUE(b.has_value());
      EXPECT_EQ(oracle::add_coboundary(m, CocycleTable::trivial(m, k), *b), target);
    }
}

TEST(Cohomology, NonCocycleIsNotCohomologous) {
  const auto i2 = rook_monoid(2);
  auto c = CocycleTable::trivial(i2, 2);
  const auto swap = idx(i2, "[10]");
  c.set(swap, swap, {1, 0});
  EXPECT_FALSE(is_trivial(i2, c).has_value());
}

TEST(Equivalence, Reflexive) {
  const auto i2 = rook_monoid(2);
  const Extension ext(i2, CocycleTable::trivial(i2, 2));
  const auto w = extensions_equivalent(ext, ext);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->atom_permutation, (std::vector<int>{0, 1}));
}

TEST(Equivalence, PerturbedCocycleWitnessIsIsomorphism) {
  const auto i2 = rook_monoid(2);
  const Extension a(i2, CocycleTable::trivial(i2, 2));
  const auto b = perturbed(i2, 2, 8);
  const auto w = extensions_equivalent(a, b);
  ASSERT_TRUE(w.has_value());
  const auto g = a.elements();
  std::vector<PhasedElement> image;
  for (const auto& v : g) {
    image.push_back(apply_equivalence(a, *w, v));
    ASSERT_TRUE(b.contains(image.back()));
  }
  auto sorted = image;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, b.elements());
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = 0; y < g.size(); ++y)
      ASSERT_EQ(apply_equivalence(a, *w, a.multiply(g[x], g[y])), b.multiply(image[x], image[y]));
}

TEST(Equivalence, DifferentMonoidsOrPhaseOrders) {
  const auto i2 = rook_monoid(2);
  const auto i3 = rook_monoid(3);
  EXPECT_FALSE(extensions_equivalent(Extension(i2, CocycleTable::trivial(i2, 2)),
                                     Extension(i3, CocycleTable::trivial(i3, 2)))
                   .has_value());
  EXPECT_FALSE(extensions_equivalent(Extension(i2, CocycleTable::trivial(i2, 2)),
                                     Extension(i2, CocycleTable::trivial(i2, 4)))
                   .has_value());
  EXPECT_THROW(extensions_equivalent(Extension(rook_monoid(4), CocycleTable::trivial(rook_monoid(4), 1)),
                                     Extension(rook_monoid(4), CocycleTable::trivial(rook_monoid(4), 1))),
               SizeGuardError);
}

TEST(Equivalence, RelabelledAtoms) {
  const auto a = equivalence_monoid({{0, 1}, {2}});
  const auto b = equivalence_monoid({{0}, {1, 2}});
  const auto w = extensions_equivalent(Extension(a, CocycleTable::trivial(a, 2)), Extension(b, CocycleTable::trivial(b, 2)));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->atom_permutation[2], 0);
}
