#include <gtest/gtest.h>

#include <random>

#include "cartanlab/errors.hpp"
#include "cartanlab/generators.hpp"
#include "cartanlab/kernel_rep.hpp"
#include "support/oracles.hpp"

using namespace cartanlab;
using oracle::parse;

namespace {

struct Fixture {
  FiniteInverseMonoid s;
  Extension ext;
  Section j;
  RBasis basis;

  Fixture(FiniteInverseMonoid m, int k)
      : s(m), ext(m, CocycleTable::trivial(m, k)), j(order_preserving_section(ext)), basis(groupoid_relation(m)) {}

  std::size_t at(const std::string& images) const { return s.require_index(parse(images)); }
  Matrix lambda_j(const std::string& images) const { return lambda_matrix(ext, j, basis, j[at(images)]); }
};

Fixture perturbed_i2(int k, std::uint64_t seed) {
  const auto i2 = rook_monoid(2);
  std::mt19937_64 rng(seed);
  Fixture f(i2, k);
  const auto c = oracle::add_coboundary(i2, CocycleTable::trivial(i2, k), oracle::random_cochain(i2, k, rng));
  f.ext = Extension(i2, c);
  f.j = order_preserving_section(f.ext);
  return f;
}

}  // namespace

TEST(Kernel, Examples) {
  const Fixture f(rook_monoid(2), 1);
  const auto one = f.at("[01]");
  EXPECT_EQ(kernel(f.ext, f.j, f.at("[10]"), f.at("[10]")), AtomSet::full(2));
  EXPECT_EQ(kernel(f.ext, f.j, one, f.at("[10]")), AtomSet());
  EXPECT_EQ(kernel(f.ext, f.j, one, f.at("[0-]")), AtomSet(0b01));
  EXPECT_EQ(kernel(f.ext, f.j, f.at("[1-]"), f.at("[10]")), AtomSet(0b01));
}

TEST(Kernel, IsSourceOfMeetOnI3) {
  const Fixture f(rook_monoid(3), 2);
  for (std::size_t s = 0; s < f.s.size(); ++s) {
    ASSERT_EQ(kernel(f.ext, f.j, s, s), f.s[s].domain());
    for (std::size_t t = 0; t < f.s.size(); ++t) {
      const auto g = oracle::glb(f.s, f.s[s], f.s[t]);
      ASSERT_TRUE(g.has_value());
      ASSERT_EQ(kernel(f.ext, f.j, t, s), g->domain());
      ASSERT_EQ(kernel(f.ext, f.j, t, s), kernel(f.ext, f.j, s, t));
    }
  }
}

TEST(Kernel, ColumnMatchesEntries) {
  const Fixture f(rook_monoid(2), 1);
  const auto column = kernel_column(f.ext, f.j, f.at("[10]"));
  ASSERT_EQ(column.size(), f.s.size());
  for (std::size_t t = 0; t < f.s.size(); ++t) EXPECT_EQ(column[t], kernel(f.ext, f.j, t, f.at("[10]")));
}

TEST(KernelPsd, IdentityAndSwapAreDisjoint) {
  const Fixture f(rook_monoid(2), 1);
  const std::vector<std::size_t> list{f.at("[01]"), f.at("[10]")};
  EXPECT_EQ(kernel_atom_matrix(f.ext, f.j, list, 0), Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(kernel_psd_check(f.ext, f.j, list).max_classes, 2U);
}

TEST(KernelPsd, IdentityAndE0ShareAtomZero) {
  const Fixture f(rook_monoid(2), 1);
  const std::vector<std::size_t> list{f.at("[01]"), f.at("[0-]")};
  const auto t = kernel_atom_matrix(f.ext, f.j, list, 0);
  EXPECT_EQ(t, Eigen::MatrixXd::Ones(2, 2));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(t);
  EXPECT_EQ(lu.rank(), 1);
  EXPECT_NEAR(oracle::min_eigenvalue(t), 0.0, 1e-12);
}

TEST(KernelPsd, AllSubsetsOfI2) {
  const Fixture f(rook_monoid(2), 2);
  const std::size_t m = f.s.size();
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    std::vector<std::size_t> list;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1U << i)) list.push_back(i);
    const auto report = kernel_psd_check(f.ext, f.j, list);
    ASSERT_EQ(report.atoms_checked, 2U);
    for (int atom = 0; atom < 2; ++atom)
      ASSERT_GE(oracle::min_eigenvalue(kernel_atom_matrix(f.ext, f.j, list, atom)), -1e-9);
  }
}

TEST(KernelPsd, RandomSubsetsOfI3) {
  const Fixture f(rook_monoid(3), 1);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, f.s.size() - 1);
  std::uniform_int_distribution<std::size_t> length(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> list;
    for (std::size_t n = length(rng); n > 0; --n) list.push_back(pick(rng));
    kernel_psd_check(f.ext, f.j, list);
    for (int atom = 0; atom < 3; ++atom)
      ASSERT_GE(oracle::min_eigenvalue(kernel_atom_matrix(f.ext, f.j, list, atom)), -1e-9);
  }
}

TEST(RBasis, RowMajor) {
  const RBasis basis(groupoid_relation(equivalence_monoid({{0, 1}, {2}})));
  ASSERT_EQ(basis.size(), 5);
  EXPECT_EQ(basis.pair(0), std::make_pair(0, 0));
  EXPECT_EQ(basis.pair(1), std::make_pair(0, 1));
  EXPECT_EQ(basis.pair(4), std::make_pair(2, 2));
  EXPECT_FALSE(basis.index(0, 2).has_value());
  EXPECT_EQ(basis.diagonal(), (std::vector<Eigen::Index>{0, 3, 4}));
}

TEST(Lambda, UnitIsIdentity) {
  const Fixture f(rook_monoid(2), 2);
  EXPECT_EQ(lambda_matrix(f.ext, f.j, f.basis, f.ext.unit()), Matrix::Identity(4, 4));
}

TEST(Lambda, SwapIsPermutation) {
  const Fixture f(rook_monoid(2), 1);
  Matrix expected = Matrix::Zero(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    const auto [x, y] = f.basis.pair(i);
    expected(f.basis.require_index(1 - x, y), i) = 1.0;
  }
  EXPECT_EQ(f.lambda_j("[10]"), expected);
}

TEST(Lambda, HomomorphismOnAllPairs) {
  for (const auto& f : {Fixture(rook_monoid(2), 2), perturbed_i2(2, 3), perturbed_i2(4, 8)}) {
    const auto g = f.ext.elements();
    if (f.ext.k() == 2) {
      ASSERT_EQ(g.size(), 17U);
    }
    std::vector<Matrix> lam;
    for (const auto& v : g) lam.push_back(lambda_matrix(f.ext, f.j, f.basis, v));
    for (std::size_t a = 0; a < g.size(); ++a) {
      ASSERT_LE(max_deviation(lam[a].adjoint(), lambda_matrix(f.ext, f.j, f.basis, f.ext.dagger(g[a]))), 1e-12);
      ASSERT_LE(max_deviation(lam[a] * lam[a].adjoint() * lam[a], lam[a]), 1e-9);
      for (std::size_t b = 0; b < g.size(); ++b) {
        const auto vw = oracle::twisted_product(f.ext, g[a], g[b]);
        ASSERT_LE(max_deviation(lam[a] * lam[b], lambda_matrix(f.ext, f.j, f.basis, vw)), 1e-12);
        if (a != b) {
          ASSERT_GT(max_deviation(lam[a], lam[b]), 0.5);
        }
      }
    }
  }
}

TEST(Projection, RankAndIsometry) {
  const Fixture f(rook_monoid(2), 2);
  const auto g = f.ext.elements();
  const auto data = projection_P_and_V(f.ext, f.j, f.basis, g);
  Eigen::FullPivLU<Matrix> lu(data.p);
  EXPECT_EQ(lu.rank(), 2);
  EXPECT_LE(max_deviation(data.v.adjoint() * data.v, Matrix::Identity(2, 2)), 1e-12);
  EXPECT_LE(max_deviation(data.v * data.v.adjoint(), data.p), 1e-12);
  EXPECT_LE(data.compression_error, 1e-12);
  EXPECT_LE(max_deviation(data.p * f.lambda_j("[10]") * data.p, Matrix::Zero(4, 4)), 1e-12);
}

TEST(Expectation, Examples) {
  const Fixture f(rook_monoid(2), 2);
  EXPECT_EQ(expectation(f.basis, Matrix::Identity(4, 4)), Matrix::Identity(4, 4));
  EXPECT_EQ(expectation(f.basis, f.lambda_j("[10]")), Matrix::Zero(4, 4));
  EXPECT_EQ(expectation(f.basis, f.lambda_j("[0-]")), f.lambda_j("[0-]"));
  const Matrix x = f.lambda_j("[10]") + 2.0 * f.lambda_j("[0-]");
  EXPECT_EQ(expectation(f.basis, expectation(f.basis, x)), expectation(f.basis, x));
}

TEST(Gram, RankEqualsRelation) {
  for (const auto& f : {Fixture(rook_monoid(2), 1), perturbed_i2(2, 4)}) {
    const auto g = f.ext.elements();
    const auto report = abstract_gram_check(f.ext, f.j, f.basis, g);
    EXPECT_EQ(report.vectors, 14U);
    EXPECT_EQ(report.rank, 4U);
    EXPECT_LE(report.isometry_error, 1e-9);
    EXPECT_LE(report.intertwining_error, 1e-9);
    EXPECT_TRUE(report.reproducing);
    EXPECT_TRUE(report.meet_rep);
  }
}

TEST(Gram, BlockMonoid) {
  const Fixture f(equivalence_monoid({{0, 1}, {2}}), 2);
  const auto g = f.ext.elements();
  EXPECT_EQ(abstract_gram_check(f.ext, f.j, f.basis, g).rank, 5U);
}

TEST(Dump, Format) {
  const Fixture f(rook_monoid(2), 1);
  const auto text = dump_matrix(f.basis, 1, f.lambda_j("[10]"));
  EXPECT_EQ(text.substr(0, text.find('\n')), "atoms=2 k=1 dim=4");
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n' ? 1 : 0;
  EXPECT_EQ(lines, 5U);
  EXPECT_NE(text.find("\n2,0,1,0\n"), std::string::npos);
}
