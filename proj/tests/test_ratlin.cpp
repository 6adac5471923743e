#include <gtest/gtest.h>

#include <random>

#include "dirdef/ratlin.hpp"
#include "oracles.hpp"

using namespace dirdef;

namespace {

MatrixQ random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int range = 3) {
  std::uniform_int_distribution<int> d(-range, range), den(1, 3);
  MatrixQ m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = frac(d(rng), den(rng));
  return m;
}

std::vector<VecQ> rows_of(const MatrixQ& m) {
  std::vector<VecQ> v;
  for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m.row(i));
  return v;
}

}  // namespace

TEST(Ratlin, RationalCanonical) {
  Rational q = parse_rational("6/-4");
  EXPECT_EQ(q, Rational(-3, 2));
  EXPECT_GT(q.get_den(), 0);
  EXPECT_EQ(to_string(q), "-3/2");
  EXPECT_THROW(parse_rational("1/0"), Error);
}

TEST(Ratlin, RankTrivial) {
  EXPECT_EQ(rank(MatrixQ(3, 3)), 0u);
  EXPECT_EQ(rank(MatrixQ::identity(5)), 5u);
}

TEST(Ratlin, So3CoboundaryRank) {
  // delta^1 : A^1 -> A^2 of so(3), columns indexed by basis maps E_{g a}
  std::vector<std::vector<std::vector<Rational>>> c(3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3)));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int g = 0; g < 3; ++g) c[a][b][g] = oracle::eps3(a, b, g);
  MatrixQ M(9, 9);
  std::vector<std::vector<Rational>> dense(9, std::vector<Rational>(9));
  for (int col = 0; col < 9; ++col) {
    std::vector<std::vector<Rational>> f(3, std::vector<Rational>(3));
    f[col / 3][col % 3] = 1;
    int row = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        for (int g = 0; g < 3; ++g, ++row) {
          M(row, col) = oracle::ce1(c, f, 3, a, b, g);
          dense[row][col] = M(row, col);
        }
  }
  EXPECT_EQ(oracle::rank(dense), 6u);
  EXPECT_EQ(rank(M), 6u);
  EXPECT_EQ(kernel_basis(M).dim(), 3u);
}

TEST(Ratlin, KernelSmall) {
  EXPECT_EQ(kernel_basis(MatrixQ::identity(3)).dim(), 0u);
  MatrixQ m = MatrixQ::from_rows({{1, 1}, {2, 2}}, 2);
  auto K = kernel_basis(m);
  ASSERT_EQ(K.dim(), 1u);
  EXPECT_EQ(K, SubspaceQ::span(2, {{1, -1}}));
}

TEST(Ratlin, RankNullityAgainstOracle) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 7;
    MatrixQ m = random_matrix(rng, r, c);
    // force some dependence
    if (r > 2 && t % 2) {
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 2 - m(1, j);
    }
    std::size_t rk = rank(m);
    EXPECT_EQ(rk, oracle::rank(rows_of(m)));
    auto K = kernel_basis(m);
    EXPECT_EQ(rk + K.dim(), c);
    for (const auto& v : K.basis()) EXPECT_TRUE(is_zero(m * v));
  }
}

TEST(Ratlin, SolveBranches) {
  std::mt19937_64 rng(2);
  auto I = MatrixQ::identity(3);
  VecQ b{1, Rational(2, 3), -5};
  auto s = solve(I, b);
  ASSERT_TRUE(s.consistent);
  EXPECT_EQ(s.x, b);
  auto z = solve(MatrixQ(2, 2), VecQ{0, 1});
  ASSERT_FALSE(z.consistent);
  EXPECT_TRUE(z.x.empty());
  EXPECT_NE(dot(z.certificate, VecQ{0, 1}), 0);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    MatrixQ m = random_matrix(rng, r, c);
    if (t % 3 == 0 && r > 1)
      for (std::size_t j = 0; j < c; ++j) m(0, j) = m(r - 1, j);
    VecQ x0(c);
    for (auto& x : x0) x = Rational(int(rng() % 7) - 3);
    VecQ rhs = t % 2 ? m * x0 : random_matrix(rng, r, 1).col(0);
    auto res = solve(m, rhs);
    if (res.consistent) {
      EXPECT_TRUE(res.certificate.empty());
      auto diff = m * res.x;
      EXPECT_EQ(diff, rhs);
    } else {
      EXPECT_TRUE(res.x.empty());
      EXPECT_TRUE(is_zero(m.transpose() * res.certificate));
      EXPECT_NE(dot(res.certificate, rhs), 0);
    }
    if (t % 2) EXPECT_TRUE(res.consistent);
  }
}

TEST(Ratlin, QuotientDim) {
  auto A = SubspaceQ::full(3);
  EXPECT_EQ(quotient_dim(A, A), 0u);
  EXPECT_EQ(quotient_dim(A, SubspaceQ(3)), 3u);
  auto B = SubspaceQ::span(3, {{1, 0, 0}});
  auto C = SubspaceQ::span(3, {{0, 1, 0}});
  EXPECT_THROW(quotient_dim(B, C), Error);
  try {
    quotient_dim(B, C);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotSubspace);
  }
}

TEST(Ratlin, SubspaceEqualityIsBasisFree) {
  auto A = SubspaceQ::span(3, {{1, 2, 3}, {0, 1, 1}});
  auto B = SubspaceQ::span(3, {{1, 3, 4}, {2, 5, 7}});
  EXPECT_EQ(A, B);
  EXPECT_TRUE(A.contains(B) && B.contains(A));
}

TEST(Ratlin, SignatureExamples) {
  auto mink = BilinearFormQ(MatrixQ::from_rows({{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}}, 4),
                            BilinearFormQ::Kind::Symmetric);
  auto s = signature_normal_form(mink);
  EXPECT_EQ(s.q_plus, 1u);
  EXPECT_EQ(s.p_minus, 3u);
  EXPECT_EQ(s.zeros, 0u);
  auto id = signature_normal_form(BilinearFormQ(MatrixQ::identity(4), BilinearFormQ::Kind::Symmetric));
  EXPECT_EQ(id.q_plus, 4u);
  MatrixQ can(4, 4);
  can(0, 2) = can(2, 0) = can(1, 3) = can(3, 1) = 1;
  auto c = signature_normal_form(BilinearFormQ(can, BilinearFormQ::Kind::Symmetric));
  EXPECT_EQ(c.q_plus, 2u);
  EXPECT_EQ(c.p_minus, 2u);
  EXPECT_EQ(c.zeros, 0u);
  MatrixQ D = c.T.transpose() * can * c.T;
  EXPECT_EQ(D, c.D);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) EXPECT_EQ(D(i, j), 0);
}

TEST(Ratlin, SignatureCongruenceInvariant) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng() % 5;
    MatrixQ a = random_matrix(rng, n, n);
    MatrixQ g = a + a.transpose();
    if (t % 4 == 0)
      for (std::size_t i = 0; i < n; ++i) g(i, i) = 0;
    auto s0 = signature_normal_form(BilinearFormQ(g, BilinearFormQ::Kind::Symmetric));
    MatrixQ D = s0.T.transpose() * g * s0.T;
    EXPECT_EQ(D, s0.D);
    MatrixQ P = random_matrix(rng, n, n);
    if (rank(P) < n) continue;
    MatrixQ h = P.transpose() * g * P;
    auto s1 = signature_normal_form(BilinearFormQ(h, BilinearFormQ::Kind::Symmetric));
    EXPECT_EQ(s0.q_plus, s1.q_plus);
    EXPECT_EQ(s0.p_minus, s1.p_minus);
    EXPECT_EQ(s0.zeros, s1.zeros);
  }
}

TEST(Ratlin, Annihilator) {
  auto g = BilinearFormQ(MatrixQ::from_rows({{1, 0}, {0, -1}}, 2), BilinearFormQ::Kind::Symmetric);
  EXPECT_EQ(annihilator(SubspaceQ(2), g).dim(), 2u);
  EXPECT_EQ(annihilator(SubspaceQ::full(2), g).dim(), 0u);
  auto W = SubspaceQ::span(2, {{1, 1}});
  EXPECT_EQ(annihilator(W, g), W);
  auto deg = BilinearFormQ(MatrixQ::from_rows({{1, 0}, {0, 0}}, 2), BilinearFormQ::Kind::Symmetric);
  try {
    annihilator(W, deg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegeneratePairing);
  }
}

TEST(Ratlin, DoubleAnnihilator) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + rng() % 4;
    MatrixQ a = random_matrix(rng, n, n);
    MatrixQ g = a + a.transpose();
    if (rank(g) < n) continue;
    BilinearFormQ form(g, BilinearFormQ::Kind::Symmetric);
    std::size_t k = rng() % (n + 1);
    auto W = SubspaceQ::span(n, rows_of(random_matrix(rng, k, n)));
    auto Wp = annihilator(W, form);
    EXPECT_EQ(W.dim() + Wp.dim(), n);
    EXPECT_EQ(annihilator(Wp, form), W);
  }
}
