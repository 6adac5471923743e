#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dirdef/error.hpp"
#include "dirdef/ihs.hpp"

using namespace dirdef;

namespace {

SuperElement P(const GenPtr& g, const std::string& s) { return SuperElement::parse(g, s); }

MatrixQ canonical_form(std::size_t n) {
  // dq ^ dp on the first two coordinates
  MatrixQ w(n, n);
  w(0, 1) = 1;
  w(1, 0) = -1;
  return w;
}

SuperElement random_poly(const GenPtr& g, std::mt19937& rng, std::size_t vars, int deg) {
  std::uniform_int_distribution<int> coef(-3, 3), e(0, deg);
  SuperElement f(g);
  for (int t = 0; t < 4; ++t) {
    std::string s = std::to_string(coef(rng));
    for (std::size_t i = 0; i < vars; ++i) {
      int p = e(rng);
      if (p > 0) s += " x" + std::to_string(i + 1) + "^" + std::to_string(p);
    }
    f += P(g, s);
  }
  return f;
}

// df/dq dg/dp - df/dp dg/dq on (x1, x2)
SuperElement canonical_bracket(const SuperElement& f, const SuperElement& g) {
  return partial_even(f, 0) * partial_even(g, 1) - partial_even(f, 1) * partial_even(g, 0);
}

}  // namespace

TEST(IHS, HamiltonEquations) {
  auto g = GeneratorSet::polynomial(2);
  IHSystem s(from_two_form(canonical_form(2)), P(g, "1/2 x1^2 + 1/2 x2^2"));
  for (VecD x : {VecD{1, 0}, VecD{0.3, -2}, VecD{-1.5, 0.25}}) {
    auto v = s.velocity_solve(x);
    ASSERT_TRUE(v.admissible);
    EXPECT_NEAR(v.xdot[0], x[1], 1e-14);
    EXPECT_NEAR(v.xdot[1], -x[0], 1e-14);
    EXPECT_EQ(v.gauge.cols, 0u);
    EXPECT_LT(std::abs(v.dH_along_xdot), 1e-12);
  }
}

TEST(IHS, BivectorGraphGivesSameFlow) {
  auto g = GeneratorSet::polynomial(2);
  MatrixQ pi(2, 2);
  pi(1, 0) = 1;
  pi(0, 1) = -1;
  EXPECT_EQ(from_bivector(pi), from_two_form(canonical_form(2)));
  IHSystem s(from_bivector(pi), P(g, "1/2 x1^2 + 1/2 x2^2"));
  auto v = s.velocity_solve({2, 1});
  EXPECT_NEAR(v.xdot[0], 1, 1e-14);
  EXPECT_NEAR(v.xdot[1], -2, 1e-14);
}

TEST(IHS, OscillatorTrajectory) {
  auto g = GeneratorSet::polynomial(2);
  IHSystem s(from_two_form(canonical_form(2)), P(g, "1/2 x1^2 + 1/2 x2^2"), 1e-3);
  const double q0 = 0.7, p0 = -0.4;
  auto tr = integrate(s, {q0, p0}, 1000);
  ASSERT_EQ(tr.x.size(), 1001u);
  EXPECT_LT(tr.max_drift, 1e-6);
  for (std::size_t k = 0; k < tr.t.size(); k += 100) {
    double t = tr.t[k];
    EXPECT_NEAR(tr.x[k][0], q0 * std::cos(t) + p0 * std::sin(t), 1e-9);
    EXPECT_NEAR(tr.x[k][1], p0 * std::cos(t) - q0 * std::sin(t), 1e-9);
  }
  EXPECT_LT(tr.max_gap, 1e-12);
}

TEST(IHS, AnharmonicDrift) {
  auto g = GeneratorSet::polynomial(2);
  IHSystem s(from_two_form(canonical_form(2)), P(g, "1/2 x2^2 + 1/4 x1^4 - 1/2 x1^2"), 1e-3);
  auto tr = integrate(s, {0.2, 0.5}, 1000);
  EXPECT_LT(tr.max_drift, 1e-6);
}

TEST(IHS, TangentOnlyAtCriticalPoints) {
  auto g = GeneratorSet::polynomial(2);
  IHSystem s(LinearDirac::tangent(2), P(g, "1/2 x1^2 + 1/2 x2^2"));
  EXPECT_FALSE(s.velocity_solve({1, 0}).admissible);
  auto v = s.velocity_solve({0, 0});
  EXPECT_TRUE(v.admissible);
  EXPECT_EQ(v.gauge.cols, 2u);
  EXPECT_THROW(integrate(s, {0.1, 0}, 3), Error);
  try {
    integrate(s, {0.1, 0}, 3);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LeftAdmissibleSet);
  }
  EXPECT_EQ(integrate(s, {0, 0}, 5).max_drift, 0.0);
}

TEST(IHS, ConstantHamiltonianIsStationary) {
  auto g = GeneratorSet::polynomial(3);
  IHSystem s(from_two_form(canonical_form(3)), P(g, "5"), 1e-2);
  auto tr = integrate(s, {0.3, -1, 0.5}, 50);
  for (const auto& x : tr.x) EXPECT_EQ(x, (VecD{0.3, -1, 0.5}));
}

TEST(IHS, ConstrainedOscillator) {
  // L cap V = span d/dx3: one constraint dH/dx3 = 0 and one free multiplier
  auto g = GeneratorSet::polynomial(3);
  LinearDirac L = from_two_form(canonical_form(3));
  IHSystem s(L, P(g, "1/2 x1^2 + 1/2 x2^2 + 1/2 x3^2 + x3 x1^2"), 1e-3);
  auto v = s.velocity_solve({0.5, 0.5, -0.25});
  ASSERT_TRUE(v.admissible);
  EXPECT_EQ(v.gauge.cols, 1u);
  EXPECT_EQ(s.constraint_residuals({0.5, 0.5, -0.25}).size(), v.gauge.cols);
  // multiplier count = n - rank of the velocity system
  MatrixQ A(3, 3);
  const auto& B = L.subspace().basis();
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i) A(j, i) = B[j][3 + i];
  EXPECT_EQ(3 - rank(A), v.gauge.cols);
  EXPECT_NEAR(v.gauge(2, 0) * v.gauge(2, 0), 1.0, 1e-14);
  EXPECT_FALSE(s.velocity_solve({0.5, 0.5, 0.1}).admissible);

  IHSystem lin(L, P(g, "1/2 x1^2 + 1/2 x2^2 + 1/2 x3^2"), 1e-3);
  auto tr = integrate(lin, {0.5, 0.5, 0}, 1000);
  for (std::size_t k = 0; k < tr.x.size(); ++k) {
    EXPECT_EQ(tr.x[k][2], 0.0);
    EXPECT_LT(tr.constraint[k], 1e-9);
  }
  EXPECT_LT(tr.max_drift, 1e-6);
  // off the constraint surface the flow is inadmissible
  EXPECT_THROW(integrate(lin, {0.5, 0.5, 0.2}, 1), Error);
}

TEST(IHS, EnergyDerivativeVanishesAtSolvePoints) {
  std::mt19937 rng(11);
  auto g = GeneratorSet::polynomial(4);
  std::uniform_int_distribution<int> d(-2, 2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    MatrixQ w(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        w(i, j) = d(rng);
        w(j, i) = -w(i, j);
      }
    LinearDirac L = from_two_form(w);
    if (in_V(L).dim() != 0) continue;
    IHSystem s(L, random_poly(g, rng, 4, 3));
    VecD x{u(rng), u(rng), u(rng), u(rng)};
    auto v = s.velocity_solve(x);
    ASSERT_TRUE(v.admissible);
    double scale = 1;
    for (double c : s.gradient(x)) scale = std::max(scale, std::abs(c));
    EXPECT_LT(std::abs(v.dH_along_xdot), 1e-12 * scale * scale);
    EXPECT_LT(v.gap, 1e-12 * scale);
  }
}

TEST(IHS, Errors) {
  auto g = GeneratorSet::polynomial(2);
  auto h = GeneratorSet::polynomial(3);
  EXPECT_THROW(IHSystem(from_two_form(canonical_form(2)), P(h, "x3")), Error);
  EXPECT_THROW(IHSystem(from_two_form(canonical_form(2)), P(g, "x1"), -1), Error);
  IHSystem s(from_two_form(canonical_form(2)), P(g, "x1"));
  EXPECT_THROW(s.velocity_solve({1, 2, 3}), Error);
}

TEST(AdmissibleBracket, Canonical) {
  auto g = GeneratorSet::polynomial(2);
  LinearDirac L = from_two_form(canonical_form(2));
  EXPECT_EQ(admissible_bracket(L, P(g, "x1"), P(g, "x2")), P(g, "1"));
  EXPECT_EQ(admissible_bracket(L, P(g, "x2"), P(g, "x1")), P(g, "-1"));
  auto X = hamiltonian_vector_field(L, P(g, "1/2 x1^2 + 1/2 x2^2"));
  EXPECT_EQ(X[0], P(g, "x2"));
  EXPECT_EQ(X[1], P(g, "-x1"));
}

TEST(AdmissibleBracket, MatchesCanonicalOracle) {
  std::mt19937 rng(3);
  auto g = GeneratorSet::polynomial(2);
  LinearDirac L = from_two_form(canonical_form(2));
  for (int t = 0; t < 30; ++t) {
    auto f = random_poly(g, rng, 2, 3), h = random_poly(g, rng, 2, 3);
    EXPECT_EQ(admissible_bracket(L, f, h), canonical_bracket(f, h));
    EXPECT_TRUE(admissible_bracket(L, f, f).is_zero());
  }
}

TEST(AdmissibleBracket, ReducedBracketWithKernel) {
  // x3 spans L cap V; admissible functions do not depend on x3
  std::mt19937 rng(5);
  auto g = GeneratorSet::polynomial(3);
  LinearDirac L = from_two_form(canonical_form(3));
  EXPECT_FALSE(is_admissible(L, P(g, "x3")));
  EXPECT_FALSE(is_admissible(L, P(g, "x1 x3^2")));
  EXPECT_TRUE(is_admissible(L, P(g, "x1^3 x2 + 4")));
  EXPECT_THROW(admissible_bracket(L, P(g, "x3"), P(g, "x1")), Error);
  EXPECT_THROW(admissible_bracket(L, P(g, "x1"), P(g, "x3 x2")), Error);
  SubspaceQ K = in_V(L);
  ASSERT_EQ(K.dim(), 1u);
  for (int t = 0; t < 20; ++t) {
    auto f = random_poly(g, rng, 2, 3), h = random_poly(g, rng, 2, 3);
    ASSERT_TRUE(is_admissible(L, f));
    auto b = admissible_bracket(L, f, h);
    EXPECT_EQ(b, canonical_bracket(f, h));
    // another Hamiltonian vector field of h: shift by a polynomial multiple of the kernel
    auto X = hamiltonian_vector_field(L, h);
    auto shift = random_poly(g, rng, 3, 2);
    SuperElement alt(g);
    for (std::size_t i = 0; i < 3; ++i) {
      SuperElement Xi = X[i] + shift * K.basis()[0][i];
      alt += Xi * partial_even(f, i);
    }
    EXPECT_EQ(alt, b);
  }
}

TEST(AdmissibleBracket, LeibnizAntisymmetryJacobi) {
  std::mt19937 rng(8);
  auto g = GeneratorSet::polynomial(4);
  MatrixQ w(4, 4);
  w(0, 1) = 1, w(1, 0) = -1;
  w(2, 3) = 2, w(3, 2) = -2;
  w(0, 3) = frac(1, 2), w(3, 0) = frac(-1, 2);
  LinearDirac L = from_two_form(w);
  auto br = [&](const SuperElement& a, const SuperElement& b) { return admissible_bracket(L, a, b); };
  for (int t = 0; t < 10; ++t) {
    auto f = random_poly(g, rng, 4, 2), h = random_poly(g, rng, 4, 2), k = random_poly(g, rng, 4, 2);
    EXPECT_EQ(br(f * h, k), h * br(f, k) + f * br(h, k));
    EXPECT_EQ(br(f, h), -br(h, f));
    EXPECT_TRUE((br(br(f, h), k) + br(br(h, k), f) + br(br(k, f), h)).is_zero());
  }
}

TEST(AdmissibleBracket, PoissonGraphJacobi) {
  // degenerate bivector: Casimir x4, everything admissible
  std::mt19937 rng(21);
  auto g = GeneratorSet::polynomial(4);
  MatrixQ pi(4, 4);
  pi(0, 1) = 1, pi(1, 0) = -1;
  pi(1, 2) = 3, pi(2, 1) = -3;
  LinearDirac L = from_bivector(pi);
  EXPECT_TRUE(admissible_bracket(L, P(g, "x4"), P(g, "x1 x2 x3")).is_zero());
  for (int t = 0; t < 10; ++t) {
    auto f = random_poly(g, rng, 4, 2), h = random_poly(g, rng, 4, 2), k = random_poly(g, rng, 4, 2);
    auto br = [&](const SuperElement& a, const SuperElement& b) { return admissible_bracket(L, a, b); };
    EXPECT_TRUE((br(br(f, h), k) + br(br(h, k), f) + br(br(k, f), h)).is_zero());
  }
}
