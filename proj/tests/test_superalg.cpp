#include <gtest/gtest.h>

#include "dirdef/superalg.hpp"
#include "gen.hpp"

using namespace dirdef;
using testgen::range;

namespace {

SuperElement P(const GenPtr& g, const std::string& s) { return SuperElement::parse(g, s); }
int sgn_pow(int e) { return (e & 1) ? -1 : 1; }

}  // namespace

TEST(Superalg, OddSquareAndAnticommutation) {
  auto g = GeneratorSet::rothstein(2, 2);
  auto a1 = P(g, "a_1");
  auto b2 = P(g, "a^2");
  EXPECT_TRUE((a1 * a1).is_zero());
  EXPECT_EQ(a1 * b2, -(b2 * a1));
  EXPECT_EQ(P(g, "q1 a_1") * P(g, "q2 a_2"), P(g, "q1 q2 a_1 a_2"));
}

TEST(Superalg, Derivatives) {
  auto g = GeneratorSet::rothstein(2, 2);
  EXPECT_EQ(partial_even(P(g, "p_1 p_2"), "p_1"), P(g, "p_2"));
  EXPECT_EQ(partial_odd(P(g, "a_2") * P(g, "a_1"), "a_1"), -P(g, "a_2"));
  EXPECT_EQ(partial_even(P(g, "q1^2 a_1 a^2"), "q1"), P(g, "2 q1 a_1 a^2"));
  EXPECT_THROW(partial_even(P(g, "q1"), "z9"), Error);
}

TEST(Superalg, Insertions) {
  auto g = GeneratorSet::rothstein(0, 2);
  auto a1 = P(g, "a_1"), a2 = P(g, "a_2");
  EXPECT_EQ(insert_left(a1, a1 * a2), a2);
  EXPECT_EQ(insert_right(a2, a1 * a2), a1);
  EXPECT_EQ(insert_right(a1, a1) - (-sgn_pow(1)) * insert_left(a1, a1), SuperElement(g));
  EXPECT_THROW(insert_left(P(g, "a_1 a_2"), a1), Error);
}

TEST(Superalg, RightLeftRelation) {
  std::mt19937_64 rng(21);
  auto g = GeneratorSet::rothstein(1, 3);
  for (int t = 0; t < 100; ++t) {
    int l = t % 5;
    auto phi = testgen::random_element(rng, g, range(0, 2), range(0, 6), 2, l, 3);
    auto s = testgen::random_element(rng, g, {}, range(0, 6), 0, 1, 2);
    EXPECT_EQ(insert_right(s, phi), -sgn_pow(l) * insert_left(s, phi));
  }
}

TEST(Superalg, Bidegree) {
  auto g = GeneratorSet::rothstein(1, 3);
  auto c = bidegree_components(P(g, "p_1"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.begin()->first, std::make_pair(1, 1));
  auto d = bidegree_components(P(g, "a_1 a_2 a^3"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.begin()->first, std::make_pair(2, 1));
  EXPECT_TRUE(bidegree_components(SuperElement(g)).empty());
}

TEST(Superalg, BidegreeSumsBack) {
  std::mt19937_64 rng(22);
  auto g = GeneratorSet::rothstein(2, 2);
  for (int t = 0; t < 50; ++t) {
    auto a = testgen::random_element(rng, g, range(0, 4), range(0, 4), 2, -1, 5);
    SuperElement s(g);
    for (auto& [k, v] : bidegree_components(a)) {
      s += v;
      for (auto& [m, c] : v.terms()) {
        EXPECT_EQ(eps_degree(*g, m), k.first);
        EXPECT_EQ(lambda_degree(*g, m), k.second);
      }
    }
    EXPECT_EQ(s, a);
  }
}

TEST(Superalg, EulerWeight) {
  auto g = GeneratorSet::schouten(1, 2);
  EXPECT_EQ(euler_weight(P(g, "v1")), 1);
  EXPECT_EQ(euler_weight(P(g, "V1")), -1);
  EXPECT_EQ(euler_weight(P(g, "x1 v1 V2")), 0);
  EXPECT_EQ(euler_weight(P(g, "v1 + x1")), std::nullopt);
}

TEST(Superalg, ProductLaws) {
  std::mt19937_64 rng(23);
  auto g = GeneratorSet::rothstein(2, 2);
  auto ev = range(0, 4), od = range(0, 4);
  for (int t = 0; t < 100; ++t) {
    int p = t % 3, q = (t / 3) % 3;
    auto a = testgen::random_element(rng, g, ev, od, 2, p, 3);
    auto b = testgen::random_element(rng, g, ev, od, 2, q, 3);
    auto c = testgen::random_element(rng, g, ev, od, 1, -1, 3);
    EXPECT_EQ(a * b, sgn_pow(p * q) * (b * a));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(Superalg, GradingsAdditive) {
  std::mt19937_64 rng(24);
  auto g = GeneratorSet::rothstein(2, 3);
  for (int t = 0; t < 100; ++t) {
    auto a = testgen::random_element(rng, g, range(0, 4), range(0, 6), 2, -1, 1);
    auto b = testgen::random_element(rng, g, range(0, 4), range(0, 6), 2, -1, 1);
    auto ab = a * b;
    if (ab.is_zero()) continue;
    const auto& ma = a.terms().begin()->first;
    const auto& mb = b.terms().begin()->first;
    const auto& m = ab.terms().begin()->first;
    EXPECT_EQ(eps_degree(*g, m), eps_degree(*g, ma) + eps_degree(*g, mb));
    EXPECT_EQ(lambda_degree(*g, m), lambda_degree(*g, ma) + lambda_degree(*g, mb));
    EXPECT_EQ(ghost_degree(*g, m), ghost_degree(*g, ma) + ghost_degree(*g, mb));
  }
}

TEST(Superalg, DerivationsSupercommute) {
  std::mt19937_64 rng(25);
  auto g = GeneratorSet::rothstein(1, 2);
  for (int t = 0; t < 50; ++t) {
    auto a = testgen::random_element(rng, g, range(0, 2), range(0, 4), 3, -1, 6);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_TRUE(partial_odd(partial_odd(a, i), i).is_zero());
      for (std::size_t j = 0; j < 4; ++j)
        EXPECT_EQ(partial_odd(partial_odd(a, i), j), -partial_odd(partial_odd(a, j), i));
      for (std::size_t e = 0; e < 2; ++e)
        EXPECT_EQ(partial_even(partial_odd(a, i), e), partial_odd(partial_even(a, e), i));
    }
    EXPECT_EQ(partial_even(partial_even(a, 0), 1), partial_even(partial_even(a, 1), 0));
  }
}

TEST(Superalg, LeftDerivativeLeibniz) {
  std::mt19937_64 rng(26);
  auto g = GeneratorSet::rothstein(1, 2);
  for (int t = 0; t < 60; ++t) {
    int p = t % 3;
    auto a = testgen::random_element(rng, g, range(0, 2), range(0, 4), 2, p, 3);
    auto b = testgen::random_element(rng, g, range(0, 2), range(0, 4), 2, -1, 3);
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_EQ(partial_odd(a * b, j), partial_odd(a, j) * b + sgn_pow(p) * (a * partial_odd(b, j)));
  }
}

TEST(Superalg, TextRoundTrip) {
  auto g = GeneratorSet::rothstein(2, 2);
  auto x = P(g, "3/2 q1^2 p_1 a_1 a^2");
  EXPECT_EQ(x.str(), "3/2 q1^2 p_1 a_1 a^2");
  EXPECT_EQ(P(g, "a^2 a_1").str(), "-a_1 a^2");
  std::mt19937_64 rng(27);
  for (int t = 0; t < 100; ++t) {
    auto a = testgen::random_element(rng, g, range(0, 4), range(0, 4), 3, -1, 4) * testgen::small_rational(rng);
    auto s = a.str();
    auto b = P(g, s);
    EXPECT_EQ(a, b);
    EXPECT_EQ(b.str(), s);
  }
  EXPECT_THROW(P(g, "q7"), Error);
  EXPECT_THROW(P(g, "2 +"), Error);
}

TEST(Superalg, GeneratorMismatch) {
  auto g = GeneratorSet::rothstein(1, 1);
  auto h = GeneratorSet::schouten(1, 1);
  try {
    auto r = P(g, "q1") * P(h, "x1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GeneratorMismatch);
  }
}
