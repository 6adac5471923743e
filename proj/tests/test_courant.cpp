#include <gtest/gtest.h>

#include <random>

#include "dirdef/courant.hpp"
#include "dirdef/lie_deform.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace dirdef;
using testgen::random_q_poly;

namespace {

// c_{ab}^g = eps_{abg}
std::vector<Rational> so3() {
  std::vector<Rational> c(27);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int g = 0; g < 3; ++g) c[(a * 3 + b) * 3 + g] = oracle::eps3(a, b, g);
  return c;
}

std::vector<Rational> so3_psi(const Rational& s) {
  auto c = so3();
  for (auto& x : c) x *= s;
  return c;
}

// 2-dim algebra [e1,e2] = e2 and the cobracket of r = e1 ^ e2
CourantInput triangular_bialgebra() {
  std::vector<Rational> c(8), cb(8);
  c[(0 * 2 + 1) * 2 + 1] = 1;
  c[(1 * 2 + 0) * 2 + 1] = -1;
  cb[(0 * 2 + 1) * 2 + 0] = 1;
  cb[(1 * 2 + 0) * 2 + 0] = -1;
  return CourantInput::point(2, c, cb);
}

SuperElement random_form(std::mt19937_64& rng, const ThetaStructure& T, int p, int deg, int terms) {
  std::vector<std::size_t> odd;
  for (std::size_t a = 0; a < T.k; ++a) odd.push_back(T.gens()->upper(a));
  return testgen::random_element(rng, T.gens(), testgen::range(0, T.m), odd, deg, p, terms);
}

// exterior derivative on R^m with a^i = dq^i, written out from the coordinate formula
SuperElement exterior_d(const ThetaStructure& T, const SuperElement& w) {
  SuperElement out(T.gens());
  for (const auto& [mono, c] : w.terms()) {
    SuperElement coeff = SuperElement::monomial(T.gens(), Monomial{mono.e, 0}, c);
    SuperElement form = SuperElement::monomial(T.gens(), Monomial{{}, mono.odd}, 1);
    for (std::size_t i = 0; i < T.m; ++i) {
      SuperElement di = partial_even(coeff, T.gens()->q(i));
      if (!di.is_zero()) out += di * T.upper(i) * form;
    }
  }
  return out;
}

struct Split {
  std::vector<SuperElement> X, xi;
};

Split split(const ThetaStructure& T, const SuperElement& e) {
  Split s{std::vector<SuperElement>(T.k, SuperElement(T.gens())), std::vector<SuperElement>(T.k, SuperElement(T.gens()))};
  for (const auto& [mono, c] : e.terms()) {
    for (std::size_t a = 0; a < T.k; ++a) {
      Monomial base{mono.e, 0};
      if (mono.odd == (1ull << T.gens()->lower(a))) s.X[a] += SuperElement::monomial(T.gens(), base, c);
      if (mono.odd == (1ull << T.gens()->upper(a))) s.xi[a] += SuperElement::monomial(T.gens(), base, c);
    }
  }
  return s;
}

SuperElement d(const ThetaStructure& T, const SuperElement& f, std::size_t i) {
  return partial_even(f, T.gens()->q(i));
}

// ([X,Y], L_X mu - i_Y d eta) on R^m
SuperElement courant_oracle(const ThetaStructure& T, const SuperElement& e1, const SuperElement& e2) {
  Split a = split(T, e1), b = split(T, e2);
  SuperElement out(T.gens());
  const std::size_t m = T.m;
  for (std::size_t j = 0; j < m; ++j) {
    SuperElement v(T.gens()), f(T.gens());
    for (std::size_t i = 0; i < m; ++i) {
      v += a.X[i] * d(T, b.X[j], i) - b.X[i] * d(T, a.X[j], i);
      f += a.X[i] * d(T, b.xi[j], i) + b.xi[i] * d(T, a.X[i], j);
      f -= b.X[i] * (d(T, a.xi[j], i) - d(T, a.xi[i], j));
    }
    out += v * T.lower(j) + f * T.upper(j);
  }
  return out;
}

}  // namespace

TEST(Courant, StandardTheta) {
  for (std::size_t m = 1; m <= 3; ++m) {
    ThetaStructure T = build_theta(CourantInput::standard(m));
    SuperElement expect(T.gens());
    for (std::size_t i = 0; i < m; ++i) expect -= SuperElement::even_gen(T.gens(), T.gens()->p(i)) * T.upper(i);
    EXPECT_EQ(T.theta, expect);
    EXPECT_TRUE(master_residuals(T.ctx, T.theta).all_zero());
  }
}

TEST(Courant, StandardBracketMatchesFormula) {
  ThetaStructure T = build_theta(CourantInput::standard(3));
  auto fam = section_family(T, 2);
  std::mt19937_64 rng(5);
  std::size_t pairs = 0;
  for (std::size_t t = 0; t < 120; ++t) {
    std::uniform_int_distribution<std::size_t> pick(0, fam.size() - 1);
    SuperElement e1 = fam[pick(rng)] + fam[pick(rng)], e2 = fam[pick(rng)] - fam[pick(rng)];
    ASSERT_EQ(courant_bracket(T, e1, e2), courant_oracle(T, e1, e2)) << e1.str() << " , " << e2.str();
    ++pairs;
  }
  EXPECT_GE(pairs, 50u);
}

TEST(Courant, StandardAxioms) {
  ThetaStructure T = build_theta(CourantInput::standard(2));
  CourantReport rep = verify_courant(T, {2, 150, 3});
  for (const auto& c : rep.identities) EXPECT_TRUE(c.ok()) << c.name << ": " << c.first_failure;
  EXPECT_TRUE(rep.ok());
  // <D f, e> = rho(e) f
  for (const auto& e : section_family(T, 1))
    for (const auto& f : {T.q(0) * T.q(1), T.q(0) * T.q(0) + T.q(1)})
      EXPECT_EQ(pairing(T, big_d(T, f), e), anchor_apply(T, e, f));
}

TEST(Courant, Doubles) {
  // cotangent double of so(3), its quasi version with invariant psi, and a triangular bialgebra
  std::vector<CourantInput> inputs{CourantInput::point(3, so3(), {}), CourantInput::point(3, so3(), {}, so3_psi(frac(-1, 24))),
                                   triangular_bialgebra(), CourantInput::standard_cotangent(2)};
  for (const auto& in : inputs) {
    ThetaStructure T = build_theta(in);
    CourantReport rep = verify_courant(T, {2, 100, 1});
    EXPECT_TRUE(rep.master.all_zero()) << rep.master.total.str();
    for (const auto& c : rep.identities) EXPECT_TRUE(c.ok()) << c.name << ": " << c.first_failure;
    CourantReport q = quasi_lemma_check(T, {2, 60, 1});
    for (const auto& c : q.identities) EXPECT_TRUE(c.ok()) << c.name << ": " << c.first_failure;
  }
}

TEST(Courant, ConnectionDoesNotChangeStructure) {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 4; ++s) {
    CourantInput in = CourantInput::standard(2);
    in.connection = testgen::random_connection(rng, in.gens, 1, 1);
    ThetaStructure T = build_theta(in);
    EXPECT_TRUE(master_residuals(T.ctx, T.theta).all_zero());
    ThetaStructure F = build_theta(CourantInput::standard(2));
    auto fam = section_family(T, 1);
    for (std::size_t i = 0; i < fam.size(); i += 3)
      for (std::size_t j = 0; j < fam.size(); j += 2) EXPECT_EQ(courant_bracket(T, fam[i], fam[j]), courant_bracket(F, fam[i], fam[j]));
  }
}

TEST(Courant, DualBracketAndDifferential) {
  std::mt19937_64 rng(3);
  std::vector<CourantInput> inputs{triangular_bialgebra(), CourantInput::standard(2), CourantInput::standard_cotangent(2),
                                   CourantInput::point(3, so3(), so3())};
  for (const auto& in : inputs) {
    ThetaStructure T = build_theta(in);
    for (int t = 0; t < 20; ++t) {
      int p = int(rng() % 3), r = int(rng() % 3);
      SuperElement a = random_form(rng, T, p, 2, 2), b = random_form(rng, T, r, 2, 2);
      EXPECT_EQ(d_L(T, a), d_L_componentwise(in, T, a)) << a.str();
      EXPECT_EQ(dual_bracket(T, a, b), dual_bracket_componentwise(in, T, a, b)) << a.str() << " , " << b.str();
    }
  }
}

TEST(Courant, TOmegaTwoWays) {
  std::mt19937_64 rng(8);
  std::vector<CourantInput> inputs{CourantInput::point(3, so3(), {}, so3_psi(frac(-1, 24))),
                                   CourantInput::point(3, so3(), so3(), so3_psi(2))};
  for (const auto& in : inputs) {
    ThetaStructure T = build_theta(in);
    for (int t = 0; t < 10; ++t) {
      SuperElement w = random_form(rng, T, 2, 0, 3);
      EXPECT_EQ(t_omega(T, w), t_omega_nested(T, w)) << w.str();
      EXPECT_EQ(mc_residual(T, w), mc_residual_componentwise(in, T, w));
    }
  }
  ThetaStructure S = build_theta(CourantInput::standard(3));
  for (int t = 0; t < 5; ++t) EXPECT_TRUE(t_omega(S, random_form(rng, S, 2, 2, 3)).is_zero());
}

TEST(Courant, ClosedFormsAreDirac) {
  CourantInput in = CourantInput::standard(3);
  ThetaStructure T = build_theta(in);
  SuperElement w = T.q(2) * T.upper(0) * T.upper(1);
  EXPECT_EQ(mc_residual(T, w), T.upper(2) * T.upper(0) * T.upper(1));
  std::mt19937_64 rng(21);
  int closed = 0;
  for (int t = 0; t < 20; ++t) {
    SuperElement w2 = random_form(rng, T, 2, 2, 3);
    if (t % 2 == 0) w2 = exterior_d(T, random_form(rng, T, 1, 2, 3));
    SuperElement r = mc_residual(T, w2);
    EXPECT_EQ(r, exterior_d(T, w2));
    EXPECT_EQ(r, mc_residual_componentwise(in, T, w2));
    closed += r.is_zero();
  }
  EXPECT_GE(closed, 10);
}

TEST(Courant, GraphClosureMatchesMC) {
  // graph(omega) = { s + i_s omega } is closed under the Courant bracket iff the residual vanishes
  std::vector<CourantInput> inputs{CourantInput::point(3, so3(), so3(), so3_psi(frac(1, 3))),
                                   CourantInput::point(3, so3(), {}, so3_psi(frac(-1, 24)))};
  std::mt19937_64 rng(4);
  for (const auto& in : inputs) {
    ThetaStructure T = build_theta(in);
    for (int t = 0; t < 10; ++t) {
      SuperElement w = random_form(rng, T, 2, 0, 2);
      SuperElement mc = mc_residual(T, w);
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          for (std::size_t c = 0; c < 3; ++c) {
            SuperElement ea = T.lower(a) + insert_section(T, T.lower(a), w);
            SuperElement eb = T.lower(b) + insert_section(T, T.lower(b), w);
            SuperElement ec = T.lower(c) + insert_section(T, T.lower(c), w);
            SuperElement lhs = pairing(T, courant_bracket(T, ea, eb), ec);
            SuperElement rhs = insert_section(T, T.lower(c), insert_section(T, T.lower(b), insert_section(T, T.lower(a), mc)));
            EXPECT_EQ(lhs, rhs) << w.str();
          }
    }
  }
}

TEST(Courant, UniversalIdentity) {
  std::mt19937_64 rng(6);
  std::vector<CourantInput> inputs{CourantInput::point(3, so3(), so3(), so3_psi(frac(1, 3))), CourantInput::standard(2),
                                   triangular_bialgebra()};
  for (const auto& in : inputs) {
    ThetaStructure T = build_theta(in);
    for (int t = 0; t < 5; ++t) {
      SuperElement w = random_form(rng, T, 2, T.m ? 2 : 0, 3);
      EXPECT_TRUE(universal_identity_residual(T, w).is_zero()) << w.str();
    }
    EXPECT_EQ(d_omega(T, SuperElement(T.gens()), T.upper(0)), d_L(T, T.upper(0)));
  }
}

TEST(Courant, PerturbedPsiBreaksCoherence) {
  std::mt19937_64 rng(1);
  // 4-dim: L* = aff(1) + R^2 so that d_* psi need not vanish
  CourantInput in = CourantInput::zero(0, 4);
  auto cb = [&](int a, int b, int g, int v) {
    in.c_bar_at(a, b, g) = SuperElement::constant(in.gens, v);
    in.c_bar_at(b, a, g) = SuperElement::constant(in.gens, -v);
  };
  cb(0, 1, 1, 1);
  ThetaStructure good = build_theta(in);
  EXPECT_TRUE(master_residuals(good.ctx, good.theta).all_zero());
  const int perm[6][4] = {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}, {1, 0, 2, -1}, {0, 2, 1, -1}, {2, 1, 0, -1}};
  for (auto p : perm) in.psi_at(p[0] + 1, p[1] + 1, p[2] + 1) = SuperElement::constant(in.gens, p[3]);
  ThetaStructure bad = build_theta(in);
  MasterResiduals mr = master_residuals(bad.ctx, bad.theta);
  EXPECT_FALSE(mr.r40.is_zero());
  CourantReport q = quasi_lemma_check(bad, {0, 0, 1});
  EXPECT_FALSE(q.identities[2].ok());
  EXPECT_THROW(require_courant(bad, {0, 0, 1}), Error);
}

TEST(Courant, LiePoissonPicture) {
  // L = T*M: 2-forms on L are bivectors, and [.,.]_* is the Schouten bracket
  ThetaStructure T = build_theta(CourantInput::standard_cotangent(3));
  auto S = BracketContext::schouten(GeneratorSet::schouten(3, 0));
  std::vector<int> even{0, 1, 2, -1, -1, -1}, odd(6, -1);
  for (int i = 0; i < 3; ++i) odd[3 + i] = i;
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    SuperElement a = random_form(rng, T, 2, 2, 3), b = random_form(rng, T, 2, 1, 2);
    SuperElement lhs = remap(dual_bracket(T, a, b), S.gens(), even, odd);
    SuperElement rhs = schouten(S, remap(a, S.gens(), even, odd), remap(b, S.gens(), even, odd));
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(mc_residual(T, a).is_zero(), schouten(S, remap(a, S.gens(), even, odd), remap(a, S.gens(), even, odd)).is_zero());
  }
}

namespace {

// so(3) with the cobracket of r = e1 ^ e2
CourantInput so3_coboundary_bialgebra() {
  std::vector<Rational> cb(27);
  auto set = [&](int a, int b, int g, int v) {
    cb[(a * 3 + b) * 3 + g] = v;
    cb[(b * 3 + a) * 3 + g] = -v;
  };
  set(0, 2, 0, 1);
  set(1, 2, 1, 1);
  return CourantInput::point(3, so3(), cb);
}

ThetaStructure so3_quasi_double() { return build_theta(CourantInput::point(3, so3(), {}, so3_psi(frac(-1, 24)))); }

// value of a p-form on frame sections, i_{s_p} ... i_{s_1} eta
SuperElement eval(const ThetaStructure& T, const SuperElement& eta, const std::vector<SuperElement>& s) {
  SuperElement out = eta;
  for (const auto& x : s) out = insert_section(T, x, out);
  return out;
}

}  // namespace

TEST(CourantDeform, So3QuasiDoubleExtends) {
  // T_omega vanishes for k = 3 (a 3x3 antisymmetric matrix is singular) and [.,.]_* = 0
  ThetaStructure T = so3_quasi_double();
  ASSERT_TRUE(master_residuals(T.ctx, T.theta).all_zero());
  std::mt19937_64 rng(12);
  for (int t = 0; t < 5; ++t) {
    SuperElement w1 = random_form(rng, T, 2, 0, 3);
    EXPECT_TRUE(t_omega(T, w1).is_zero());
    DiracDeformReport rep = deform_dirac(T, w1, 4);
    EXPECT_FALSE(rep.obstructed);
    ASSERT_EQ(rep.orders.size(), 3u);
    for (const auto& c : rep.orders) {
      EXPECT_TRUE(c.constant_case);
      EXPECT_EQ(c.h3_dim, 1u);
      EXPECT_TRUE(c.R.is_zero());
    }
  }
}

TEST(CourantDeform, So3BialgebraExtends) {
  // the dual of the coboundary structure is the book algebra, on which [w, w]_* vanishes
  ThetaStructure T = build_theta(so3_coboundary_bialgebra());
  ASSERT_TRUE(master_residuals(T.ctx, T.theta).all_zero());
  std::mt19937_64 rng(19);
  for (int t = 0; t < 5; ++t) {
    DiracCertificate c = deform_extend_dirac(T, {random_form(rng, T, 2, 0, 3)});
    EXPECT_EQ(c.h3_dim, 1u);
    EXPECT_TRUE(c.extends());
  }
}

TEST(CourantDeform, HeisenbergDualObstruction) {
  // L abelian, L* Heisenberg: d_L = 0 and H^3(L) = Lambda^3
  std::vector<Rational> heis(27);
  heis[(0 * 3 + 1) * 3 + 2] = 1;
  heis[(1 * 3 + 0) * 3 + 2] = -1;
  ThetaStructure T = build_theta(CourantInput::point(3, {}, heis));
  ASSERT_TRUE(master_residuals(T.ctx, T.theta).all_zero());
  std::mt19937_64 rng(13);
  int obstructed = 0, extended = 0;
  for (int t = 0; t < 12; ++t) {
    SuperElement w1 = random_form(rng, T, 2, 0, 1 + t % 3);
    ASSERT_TRUE(d_L(T, w1).is_zero());
    DiracCertificate c = deform_extend_dirac(T, {w1});
    EXPECT_EQ(c.h3_dim, 1u);
    EXPECT_EQ(c.R, frac(-1, 2) * dual_bracket(T, w1, w1));
    EXPECT_EQ(c.extends(), c.R.is_zero());
    if (!c.extends()) {
      EXPECT_EQ(c.verdict, DiracVerdict::Obstructed);
      ++obstructed;
    } else {
      ++extended;
    }
  }
  EXPECT_GT(obstructed, 0);
  EXPECT_GT(extended, 0);
}

TEST(CourantDeform, ConstantCaseAgreesWithRankOracle) {
  // three ways to decide extension: verdict, exactness by ranks, and closure of the extended series
  std::mt19937_64 rng(14);
  std::vector<ThetaStructure> thetas{so3_quasi_double(), build_theta(triangular_bialgebra()),
                                     build_theta(CourantInput::point(3, so3(), {}))};
  for (const auto& T : thetas)
    for (int t = 0; t < 6; ++t) {
      SuperElement w1 = random_form(rng, T, 2, 0, 2);
      if (!d_L(T, w1).is_zero()) w1 = d_L(T, random_form(rng, T, 1, 0, 2));
      DiracCertificate c = deform_extend_dirac(T, {w1});
      std::vector<std::vector<Rational>> D, DR;
      std::vector<SuperElement> basis;
      for (std::size_t a = 0; a < T.k; ++a)
        for (std::size_t b = a + 1; b < T.k; ++b) basis.push_back(T.upper(a) * T.upper(b));
      std::vector<SuperElement> rows;
      for (std::size_t a = 0; a < T.k; ++a)
        for (std::size_t b = a + 1; b < T.k; ++b)
          for (std::size_t g = b + 1; g < T.k; ++g) rows.push_back(T.upper(a) * T.upper(b) * T.upper(g));
      auto coeff = [&](const SuperElement& x, const SuperElement& mono) {
        auto it = x.terms().find(mono.terms().begin()->first);
        return it == x.terms().end() ? Rational(0) : it->second;
      };
      for (const auto& r : rows) {
        std::vector<Rational> row, rowR;
        for (const auto& b : basis) row.push_back(coeff(d_L(T, b), r));
        rowR = row;
        rowR.push_back(coeff(c.R, r));
        D.push_back(row);
        DR.push_back(rowR);
      }
      const bool exact = rows.empty() || oracle::rank(D) == oracle::rank(DR);
      EXPECT_EQ(c.extends(), exact);
      if (c.extends()) {
        auto res = mc_residual_series(T, {SuperElement(T.gens()), w1, *c.solution});
        EXPECT_TRUE(res[2].is_zero());
      } else {
        EXPECT_FALSE(c.witness.empty());
      }
    }
}

TEST(CourantDeform, StandardClosedFormsExtendTrivially) {
  ThetaStructure T = build_theta(CourantInput::standard(3));
  std::mt19937_64 rng(15);
  for (int t = 0; t < 5; ++t) {
    SuperElement w1 = d_L(T, random_form(rng, T, 1, 2, 3));
    DiracDeformReport rep = deform_dirac(T, w1, 4, 3);
    EXPECT_FALSE(rep.obstructed);
    EXPECT_EQ(rep.reached, 4u);
    std::vector<SuperElement> series{SuperElement(T.gens())};
    series.insert(series.end(), rep.omega.begin(), rep.omega.end());
    for (const auto& r : mc_residual_series(T, series)) EXPECT_TRUE(r.is_zero());
    for (const auto& c : rep.orders) EXPECT_FALSE(c.constant_case);
  }
}

TEST(CourantDeform, PoissonSideNeedsSchoutenSquare) {
  // L = T*M: d_L = 0, so the second order asks for [pi, pi] = 0
  ThetaStructure T = build_theta(CourantInput::standard_cotangent(3));
  SuperElement pi = T.q(1) * T.upper(1) * T.upper(2) + T.upper(0) * T.upper(1);
  DiracCertificate c = deform_extend_dirac(T, {pi});
  EXPECT_FALSE(c.R.is_zero());
  EXPECT_EQ(c.verdict, DiracVerdict::NoSolutionUpToDegree);
  SuperElement lin = T.q(0) * T.upper(1) * T.upper(2);
  EXPECT_TRUE(deform_extend_dirac(T, {lin}).extends());
}

TEST(CourantDeform, Errors) {
  ThetaStructure T = build_theta(CourantInput::standard(3));
  SuperElement open = T.q(2) * T.upper(0) * T.upper(1);
  EXPECT_THROW(deform_extend_dirac(T, {open}), Error);
  try {
    deform_extend_dirac(T, {open});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PreconditionMC);
  }
  SuperElement big = T.q(0) * T.q(0) * T.q(0) * T.upper(1) * T.upper(2);
  try {
    deform_extend_dirac(T, {big}, 2);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegreeCapExceeded);
  }
}

TEST(CourantDeform, ClosednessOfObstruction) {
  // random prefixes built by the solver itself; d_L R = 0 at the first undetermined order
  std::mt19937_64 rng(16);
  std::vector<ThetaStructure> thetas{so3_quasi_double(), build_theta(CourantInput::point(3, so3(), so3())),
                                     build_theta(triangular_bialgebra()), build_theta(CourantInput::standard(2))};
  int checked = 0;
  for (const auto& T : thetas)
    for (int t = 0; t < 4; ++t) {
      SuperElement w1 = d_L(T, random_form(rng, T, 1, T.m ? 1 : 0, 2));
      DiracDeformReport rep = deform_dirac(T, w1, 3, 3);
      for (const auto& c : rep.orders) {
        EXPECT_TRUE(c.d_R.is_zero());
        ++checked;
      }
    }
  EXPECT_GE(checked, 16);
}

TEST(CourantReparam, SeriesIdentities) {
  ThetaStructure T = build_theta(CourantInput::standard(3));
  std::mt19937_64 rng(17);
  const SuperElement zero(T.gens());
  for (int t = 0; t < 5; ++t) {
    std::vector<SuperElement> w{zero, random_form(rng, T, 2, 1, 2), random_form(rng, T, 2, 1, 2),
                                random_form(rng, T, 2, 0, 2)};
    SuperElement lam = testgen::random_element(rng, T.gens(), testgen::range(0, 3), testgen::range(0, 3), 1, 2, 2);
    EXPECT_EQ(reparametrize_complement(T, zero, w), w);
    auto wp = reparametrize_complement(T, lam, w);
    EXPECT_EQ(wp[1], w[1]);
    // second order: -w1 Lambda w1
    auto W1 = form_matrix(T, w[1]), L = bivector_matrix(T, lam), W2 = form_matrix(T, w[2]);
    std::vector<SuperElement> expect(9, zero);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        expect[i * 3 + j] = W2[i * 3 + j];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) expect[i * 3 + j] -= W1[i * 3 + a] * L[a * 3 + b] * W1[b * 3 + j];
      }
    EXPECT_EQ(form_matrix(T, wp[2]), expect);
    EXPECT_EQ(reparametrize_complement(T, -lam, wp), w);
    // nu_Lambda(s + w'(s)) = u + w(u) with u = s - Lambda w'(s), order by order
    for (std::size_t a = 0; a < 3; ++a) {
      std::vector<SuperElement> u(4, zero);
      u[0] = T.lower(a);
      for (int n = 1; n <= 3; ++n) u[n] = -rothstein(T.ctx, insert_section(T, T.lower(a), wp[n]), lam);
      for (int n = 1; n <= 3; ++n) {
        SuperElement lhs(T.gens());
        for (int i = 1; i <= n; ++i) lhs += insert_section(T, u[n - i], w[i]);
        EXPECT_EQ(lhs, insert_section(T, T.lower(a), wp[n]));
      }
    }
  }
}

TEST(CourantReparam, ResidualPullsBack) {
  // MC'(w') = A^* MC(w) with A = id - Lambda w', so the first failing order and its residual agree
  CourantInput in = CourantInput::standard(3);
  ThetaStructure T = build_theta(in);
  std::mt19937_64 rng(18);
  const SuperElement zero(T.gens());
  for (int t = 0; t < 3; ++t) {
    std::vector<SuperElement> w{zero, d_L(T, random_form(rng, T, 1, 2, 2)), random_form(rng, T, 2, 1, 2),
                                random_form(rng, T, 2, 1, 2)};
    SuperElement lam = testgen::random_element(rng, T.gens(), testgen::range(0, 3), testgen::range(0, 3), 1, 2, 2);
    auto wp = reparametrize_complement(T, lam, w);
    ThetaStructure Tp = change_complement(T, lam);
    EXPECT_TRUE(master_residuals(Tp.ctx, Tp.theta).all_zero());
    EXPECT_TRUE(Tp.phi.is_zero());
    EXPECT_EQ(Tp.mu, T.mu);
    auto r = mc_residual_series(T, w), rp = mc_residual_series(Tp, wp);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b)
        for (std::size_t g = b + 1; g < 3; ++g) {
          auto A = [&](std::size_t x, int n) {
            return n == 0 ? T.lower(x) : -rothstein(T.ctx, insert_section(T, T.lower(x), wp[n]), lam);
          };
          for (int n = 1; n <= 3; ++n) {
            SuperElement lhs(T.gens());
            for (int i = 1; i <= n; ++i)
              for (int j = 0; i + j <= n; ++j)
                for (int k = 0; i + j + k <= n; ++k) {
                  int l = n - i - j - k;
                  lhs += eval(T, r[i], {A(a, j), A(b, k), A(g, l)});
                }
            EXPECT_EQ(lhs, eval(T, rp[n], {T.lower(a), T.lower(b), T.lower(g)})) << "order " << n;
          }
        }
  }
}
