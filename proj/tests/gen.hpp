#pragma once

#include <algorithm>
#include <random>

#include "dirdef/brackets.hpp"
#include "dirdef/multideriv.hpp"
#include "dirdef/multimap.hpp"
#include "dirdef/superalg.hpp"

namespace testgen {

using namespace dirdef;

inline Rational small_rational(std::mt19937_64& rng, int range = 3) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 2);
  return frac(num(rng), den(rng));
}

inline Rational nonzero_int(std::mt19937_64& rng, int range = 3) {
  std::uniform_int_distribution<int> num(1, range), s(0, 1);
  return Rational(s(rng) ? num(rng) : -num(rng));
}

// random element; evens restricted to `even_vars`, odds to `odd_vars`; fixed odd degree if odd_deg >= 0
inline SuperElement random_element(std::mt19937_64& rng, const GenPtr& gs, const std::vector<std::size_t>& even_vars,
                                   const std::vector<std::size_t>& odd_vars, int max_even_deg, int odd_deg,
                                   int terms) {
  SuperElement r(gs);
  std::uniform_int_distribution<int> edeg(0, max_even_deg);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int d = even_vars.empty() ? 0 : edeg(rng);
    for (int s = 0; s < d; ++s) m.e[even_vars[std::uniform_int_distribution<std::size_t>(0, even_vars.size() - 1)(rng)]]++;
    int od = odd_deg;
    if (od < 0) od = std::uniform_int_distribution<int>(0, int(odd_vars.size()))(rng);
    if (od > int(odd_vars.size())) continue;
    std::vector<std::size_t> pool = odd_vars;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int s = 0; s < od; ++s) m.odd |= std::uint64_t(1) << pool[s];
    r.add_term(m, nonzero_int(rng));
  }
  return r;
}

inline std::vector<std::size_t> range(std::size_t a, std::size_t b) {
  std::vector<std::size_t> v;
  for (std::size_t i = a; i < b; ++i) v.push_back(i);
  return v;
}

// random polynomial in the base variables q1..qm of a rothstein set
inline SuperElement random_q_poly(std::mt19937_64& rng, const GenPtr& gs, int max_deg, int terms) {
  return random_element(rng, gs, range(0, gs->base_dim()), {}, max_deg, 0, terms);
}

inline ConnectionData random_connection(std::mt19937_64& rng, const GenPtr& gs, int max_deg, int terms = 2) {
  ConnectionData c(gs);
  for (std::size_t i = 0; i < gs->base_dim(); ++i)
    for (std::size_t a = 0; a < gs->pairs(); ++a)
      for (std::size_t b = 0; b < gs->pairs(); ++b) c.gamma(i, a, b) = random_q_poly(rng, gs, max_deg, terms);
  return c;
}

// random antisymmetric map; each coefficient nonzero with probability `density`
inline MultiMap random_multimap(std::mt19937_64& rng, std::size_t arity, std::size_t dim, double density = 0.5) {
  MultiMap f(arity, dim);
  std::bernoulli_distribution keep(density);
  for (auto& x : f.flat())
    if (keep(rng)) x = nonzero_int(rng, 2);
  return f;
}

inline NonSymMultiMap random_nonsym(std::mt19937_64& rng, std::size_t arity, std::size_t dim, double density = 0.5) {
  NonSymMultiMap f(arity, dim);
  std::bernoulli_distribution keep(density);
  for (std::size_t t = 0; t < f.n_tuples(); ++t)
    for (std::size_t g = 0; g < dim; ++g)
      if (keep(rng)) f.at(f.unrank(t), g) = nonzero_int(rng, 2);
  return f;
}

// random polynomial in the ring x1..xm (m may be 0), degree <= deg
inline SuperElement random_poly(std::mt19937_64& rng, const GenPtr& ring, int deg, int terms) {
  return random_element(rng, ring, range(0, ring->n_even()), {}, ring->n_even() ? deg : 0, 0, terms);
}

// each coefficient nonzero with probability `density`
inline MultiDerivation random_multideriv(std::mt19937_64& rng, int n, std::size_t m, std::size_t k, int deg,
                                         double density = 0.4) {
  MultiDerivation D(n, m, k);
  std::bernoulli_distribution keep(density);
  for (std::size_t t = 0; t < D.n_d_tuples(); ++t)
    for (std::size_t g = 0; g < k; ++g)
      if (keep(rng)) D.d(t, g) = random_poly(rng, D.ring(), deg, 2);
  for (std::size_t t = 0; t < D.n_sigma_tuples(); ++t)
    for (std::size_t i = 0; i < m; ++i)
      if (keep(rng)) D.sigma(t, i) = random_poly(rng, D.ring(), deg, 2);
  return D;
}

inline Section random_section(std::mt19937_64& rng, const GenPtr& ring, std::size_t k, int deg) {
  Section s;
  for (std::size_t a = 0; a < k; ++a) s.push_back(random_poly(rng, ring, deg, 2));
  return s;
}

}  // namespace testgen
