#include "dirdef/courant.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "dirdef/linearize.hpp"

namespace dirdef {

namespace {

bool q_only(const GeneratorSet& G, const SuperElement& a) {
  for (const auto& [mono, c] : a.terms()) {
    if (mono.odd) return false;
    for (std::size_t i = G.base_dim(); i < kMaxEven; ++i)
      if (mono.e[i]) return false;
  }
  return true;
}

int q_degree(const SuperElement& a) {
  int d = 0;
  for (const auto& [mono, c] : a.terms()) d = std::max(d, mono.even_degree());
  return d;
}

std::vector<Monomial> q_monomials(std::size_t m, int deg) {
  std::vector<Monomial> out{Monomial{}};
  std::vector<Monomial> layer{Monomial{}};
  for (int d = 1; d <= deg && m > 0; ++d) {
    std::vector<Monomial> next;
    for (const Monomial& x : layer) {
      std::size_t last = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (x.e[i]) last = i;
      for (std::size_t i = last; i < m; ++i) {
        Monomial y = x;
        y.e[i]++;
        next.push_back(y);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::map<Monomial, Rational> coords(const SuperElement& a) { return {a.terms().begin(), a.terms().end()}; }

std::string brief(const SuperElement& a) {
  std::string s = a.str();
  if (s.size() > 160) s = s.substr(0, 157) + "...";
  return s;
}

// only the odd-degree-one part in the lower (L) generators
SuperElement project_L(const ThetaStructure& T, const SuperElement& e) {
  SuperElement out(T.gens());
  const std::uint64_t lower_mask = (T.k == 64 ? ~0ull : ((1ull << T.k) - 1));
  for (const auto& [mono, c] : e.terms())
    if (mono.odd && (mono.odd & ~lower_mask) == 0) out.add_term(mono, c);
  return out;
}

void require_gens(const GeneratorSet& G, const SuperElement& a, const char* what) {
  if (a.gens() && !a.gens()->same_as(G)) throw Error(Errc::Shape, std::string(what) + ": foreign generator set");
}

}  // namespace

CourantInput CourantInput::zero(std::size_t m, std::size_t k) {
  CourantInput in;
  in.m = m;
  in.k = k;
  in.gens = GeneratorSet::rothstein(m, k);
  const SuperElement z(in.gens);
  in.rho.assign(m * k, z);
  in.rho_bar.assign(m * k, z);
  in.c.assign(k * k * k, z);
  in.c_bar.assign(k * k * k, z);
  in.psi.assign(k * k * k, z);
  return in;
}

CourantInput CourantInput::standard(std::size_t m) {
  CourantInput in = zero(m, m);
  for (std::size_t i = 0; i < m; ++i) in.rho_at(i, i) = SuperElement::constant(in.gens, 1);
  return in;
}

CourantInput CourantInput::standard_cotangent(std::size_t m) {
  CourantInput in = zero(m, m);
  for (std::size_t i = 0; i < m; ++i) in.rho_bar_at(i, i) = SuperElement::constant(in.gens, 1);
  return in;
}

CourantInput CourantInput::point(std::size_t k, const std::vector<Rational>& c, const std::vector<Rational>& c_bar,
                                 const std::vector<Rational>& psi) {
  CourantInput in = zero(0, k);
  auto fill = [&](std::vector<SuperElement>& dst, const std::vector<Rational>& src, const char* what) {
    if (src.empty()) return;
    if (src.size() != k * k * k) throw Error(Errc::Shape, std::string(what) + " needs k^3 entries");
    for (std::size_t i = 0; i < src.size(); ++i)
      if (src[i] != 0) dst[i] = SuperElement::constant(in.gens, src[i]);
  };
  fill(in.c, c, "c");
  fill(in.c_bar, c_bar, "c_bar");
  fill(in.psi, psi, "psi");
  in.validate();
  return in;
}

void CourantInput::validate() const {
  if (!gens || gens->base_dim() != m || gens->pairs() != k || gens->n_odd() != 2 * k || gens->n_even() != 2 * m)
    throw Error(Errc::Shape, "courant input: generator set does not match (m, k)");
  if (rho.size() != m * k || rho_bar.size() != m * k || c.size() != k * k * k || c_bar.size() != k * k * k ||
      psi.size() != k * k * k)
    throw Error(Errc::Shape, "courant input: structure arrays have the wrong size");
  for (const auto* v : {&rho, &rho_bar, &c, &c_bar, &psi})
    for (const SuperElement& a : *v) {
      require_gens(*gens, a, "courant input");
      if (!q_only(*gens, a)) throw Error(Errc::Shape, "courant input: structure functions must be polynomials in q");
    }
  auto idx = [this](std::size_t a, std::size_t b, std::size_t g) { return (a * k + b) * k + g; };
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t g = 0; g < k; ++g) {
        if (c[idx(a, b, g)] != -c[idx(b, a, g)]) throw Error(Errc::NotAntisymmetric, "c is not antisymmetric");
        if (c_bar[idx(a, b, g)] != -c_bar[idx(b, a, g)])
          throw Error(Errc::NotAntisymmetric, "c_bar is not antisymmetric");
        const SuperElement& p = psi[idx(a, b, g)];
        if (p != -psi[idx(b, a, g)] || p != -psi[idx(a, g, b)])
          throw Error(Errc::NotAntisymmetric, "psi is not totally antisymmetric");
      }
  if (connection) {
    if (!connection->gens()->same_as(*gens)) throw Error(Errc::Shape, "connection lives on another generator set");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          if (!q_only(*gens, connection->gamma(i, a, b)))
            throw Error(Errc::Shape, "connection coefficients must be polynomials in q");
  }
}

bool CourantInput::constant_coefficients() const {
  for (const auto* v : {&c, &c_bar, &psi})
    for (const SuperElement& a : *v)
      if (q_degree(a) > 0) return false;
  return true;
}

SuperElement ThetaStructure::lower(std::size_t a) const { return SuperElement::odd_gen(gens(), gens()->lower(a)); }
SuperElement ThetaStructure::upper(std::size_t a) const { return SuperElement::odd_gen(gens(), gens()->upper(a)); }
SuperElement ThetaStructure::q(std::size_t i) const { return SuperElement::even_gen(gens(), gens()->q(i)); }

namespace {

const SuperElement& gamma_or_zero(const BracketContext& ctx, std::size_t i, std::size_t a, std::size_t b,
                                  const SuperElement& zero) {
  return ctx.connection() ? ctx.connection()->gamma(i, a, b) : zero;
}

}  // namespace

SuperElement mu_r_form(const CourantInput& in, const BracketContext& ctx) {
  const GenPtr& G = ctx.gens();
  auto r = darboux_momenta(ctx);
  SuperElement mu(G);
  for (std::size_t i = 0; i < in.m; ++i)
    for (std::size_t a = 0; a < in.k; ++a) {
      const SuperElement& rho = in.rho[i * in.k + a];
      if (!rho.is_zero()) mu -= rho * r[i] * SuperElement::odd_gen(G, G->upper(a));
    }
  for (std::size_t a = 0; a < in.k; ++a)
    for (std::size_t b = 0; b < in.k; ++b)
      for (std::size_t g = 0; g < in.k; ++g) {
        const SuperElement& c = in.c_at(a, b, g);
        if (c.is_zero()) continue;
        mu -= frac(1, 2) * c * SuperElement::odd_gen(G, G->upper(a)) * SuperElement::odd_gen(G, G->upper(b)) *
              SuperElement::odd_gen(G, G->lower(g));
      }
  return mu;
}

SuperElement mu_torsion_form(const CourantInput& in, const BracketContext& ctx) {
  const GenPtr& G = ctx.gens();
  const SuperElement zero(G);
  SuperElement mu(G);
  for (std::size_t i = 0; i < in.m; ++i)
    for (std::size_t a = 0; a < in.k; ++a) {
      const SuperElement& rho = in.rho[i * in.k + a];
      if (!rho.is_zero()) mu -= rho * SuperElement::even_gen(G, G->p(i)) * SuperElement::odd_gen(G, G->upper(a));
    }
  for (std::size_t a = 0; a < in.k; ++a)
    for (std::size_t b = 0; b < in.k; ++b)
      for (std::size_t g = 0; g < in.k; ++g) {
        SuperElement t = in.c_at(a, b, g);
        for (std::size_t i = 0; i < in.m; ++i) {
          t -= in.rho[i * in.k + a] * gamma_or_zero(ctx, i, b, g, zero);
          t += in.rho[i * in.k + b] * gamma_or_zero(ctx, i, a, g, zero);
        }
        if (t.is_zero()) continue;
        mu -= frac(1, 2) * t * SuperElement::odd_gen(G, G->upper(a)) * SuperElement::odd_gen(G, G->upper(b)) *
              SuperElement::odd_gen(G, G->lower(g));
      }
  return mu;
}

SuperElement gamma_r_form(const CourantInput& in, const BracketContext& ctx) {
  const GenPtr& G = ctx.gens();
  auto r = darboux_momenta(ctx);
  SuperElement ga(G);
  for (std::size_t i = 0; i < in.m; ++i)
    for (std::size_t a = 0; a < in.k; ++a) {
      const SuperElement& rho = in.rho_bar[i * in.k + a];
      if (!rho.is_zero()) ga -= rho * r[i] * SuperElement::odd_gen(G, G->lower(a));
    }
  for (std::size_t a = 0; a < in.k; ++a)
    for (std::size_t b = 0; b < in.k; ++b)
      for (std::size_t g = 0; g < in.k; ++g) {
        const SuperElement& c = in.c_bar_at(a, b, g);
        if (c.is_zero()) continue;
        ga -= frac(1, 2) * c * SuperElement::odd_gen(G, G->lower(a)) * SuperElement::odd_gen(G, G->lower(b)) *
              SuperElement::odd_gen(G, G->upper(g));
      }
  return ga;
}

SuperElement gamma_torsion_form(const CourantInput& in, const BracketContext& ctx) {
  const GenPtr& G = ctx.gens();
  const SuperElement zero(G);
  SuperElement ga(G);
  for (std::size_t i = 0; i < in.m; ++i)
    for (std::size_t a = 0; a < in.k; ++a) {
      const SuperElement& rho = in.rho_bar[i * in.k + a];
      if (!rho.is_zero()) ga -= rho * SuperElement::even_gen(G, G->p(i)) * SuperElement::odd_gen(G, G->lower(a));
    }
  for (std::size_t a = 0; a < in.k; ++a)
    for (std::size_t b = 0; b < in.k; ++b)
      for (std::size_t g = 0; g < in.k; ++g) {
        SuperElement t = in.c_bar_at(a, b, g);
        for (std::size_t i = 0; i < in.m; ++i) {
          t -= in.rho_bar[i * in.k + b] * gamma_or_zero(ctx, i, g, a, zero);
          t += in.rho_bar[i * in.k + a] * gamma_or_zero(ctx, i, g, b, zero);
        }
        if (t.is_zero()) continue;
        ga -= frac(1, 2) * t * SuperElement::odd_gen(G, G->lower(a)) * SuperElement::odd_gen(G, G->lower(b)) *
              SuperElement::odd_gen(G, G->upper(g));
      }
  return ga;
}

ThetaStructure build_theta(const CourantInput& in) {
  in.validate();
  ThetaStructure T{in.connection ? BracketContext::rothstein(*in.connection) : BracketContext::rothstein_flat(in.gens),
                   SuperElement(in.gens),
                   SuperElement(in.gens),
                   SuperElement(in.gens),
                   SuperElement(in.gens),
                   SuperElement(in.gens),
                   in.m,
                   in.k};
  T.mu = mu_r_form(in, T.ctx);
  T.gamma = gamma_r_form(in, T.ctx);
  if (T.mu != mu_torsion_form(in, T.ctx)) throw Error(Errc::Shape, "torsion and r-forms of mu disagree");
  if (T.gamma != gamma_torsion_form(in, T.ctx)) throw Error(Errc::Shape, "torsion and r-forms of gamma disagree");
  const GenPtr& G = in.gens;
  for (std::size_t a = 0; a < in.k; ++a)
    for (std::size_t b = 0; b < in.k; ++b)
      for (std::size_t g = 0; g < in.k; ++g) {
        const SuperElement& p = in.psi_at(a, b, g);
        if (p.is_zero()) continue;
        T.psi += p * SuperElement::odd_gen(G, G->lower(a)) * SuperElement::odd_gen(G, G->lower(b)) *
                 SuperElement::odd_gen(G, G->lower(g));
      }
  T.theta = T.mu + T.gamma + T.psi;
  ThetaParts parts = split_theta(T.theta);
  if (parts.mu != T.mu || parts.gamma != T.gamma || parts.psi != T.psi || !parts.phi.is_zero())
    throw Error(Errc::Shape, "Theta parts do not have the expected bidegrees");
  return T;
}

SuperElement courant_bracket(const ThetaStructure& T, const SuperElement& e1, const SuperElement& e2) {
  return rothstein(T.ctx, rothstein(T.ctx, e1, T.theta), e2);
}

SuperElement anchor_apply(const ThetaStructure& T, const SuperElement& e, const SuperElement& f) {
  return rothstein(T.ctx, rothstein(T.ctx, e, T.theta), f);
}

SuperElement pairing(const ThetaStructure& T, const SuperElement& e1, const SuperElement& e2) {
  return rothstein(T.ctx, e1, e2);
}

SuperElement big_d(const ThetaStructure& T, const SuperElement& f) { return rothstein(T.ctx, T.theta, f); }

SuperElement d_L(const ThetaStructure& T, const SuperElement& form) { return rothstein(T.ctx, T.mu, form); }

SuperElement dual_bracket(const ThetaStructure& T, const SuperElement& a, const SuperElement& b) {
  return rothstein(T.ctx, rothstein(T.ctx, a, T.gamma), b);
}

SuperElement psi_triple(const ThetaStructure& T, const SuperElement& a, const SuperElement& b, const SuperElement& c) {
  return rothstein(T.ctx, rothstein(T.ctx, rothstein(T.ctx, T.psi, a), b), c);
}

SuperElement insert_section(const ThetaStructure& T, const SuperElement& s, const SuperElement& form) {
  return rothstein(T.ctx, s, form);
}

namespace {

void require_form(const ThetaStructure& T, const SuperElement& a) {
  const GeneratorSet& G = *T.gens();
  const std::uint64_t lower_mask = (T.k == 64 ? ~0ull : ((1ull << T.k) - 1));
  for (const auto& [mono, c] : a.terms()) {
    if (mono.odd & lower_mask) throw Error(Errc::WrongDegree, "expected a form on L (no L generators)");
    for (std::size_t i = G.base_dim(); i < 2 * G.base_dim(); ++i)
      if (mono.e[i]) throw Error(Errc::WrongDegree, "expected a form on L (no momenta)");
  }
}

// generators of forms on L: q_i (degree 0) and a^alpha (degree 1)
struct Factor {
  bool odd;
  std::size_t idx;
};

std::vector<Factor> factors(const Monomial& m, std::size_t base, std::size_t k) {
  std::vector<Factor> out;
  for (std::size_t i = 0; i < base; ++i)
    for (int e = 0; e < m.e[i]; ++e) out.push_back({false, i});
  for (std::size_t a = 0; a < k; ++a)
    if (m.odd >> (k + a) & 1) out.push_back({true, a});
  return out;
}

class Gerstenhaber {
 public:
  Gerstenhaber(const CourantInput& in, const ThetaStructure& T) : in_(in), T_(T) {}

  SuperElement bracket(const SuperElement& P, const SuperElement& R) const {
    SuperElement out(T_.gens());
    for (const auto& [pm, pc] : P.terms())
      for (const auto& [rm, rc] : R.terms()) {
        SuperElement b = mono(factors(pm, in_.m, in_.k), factors(rm, in_.m, in_.k));
        if (!b.is_zero()) out += (pc * rc) * b;
      }
    return out;
  }

 private:
  static int degree(const std::vector<Factor>& f) {
    int d = 0;
    for (const Factor& x : f) d += x.odd;
    return d;
  }
  SuperElement product(const std::vector<Factor>& f, std::size_t from) const {
    SuperElement out = SuperElement::constant(T_.gens(), 1);
    for (std::size_t i = from; i < f.size(); ++i) out = out * element(f[i]);
    return out;
  }
  SuperElement element(const Factor& x) const { return x.odd ? T_.upper(x.idx) : T_.q(x.idx); }

  SuperElement base(const Factor& x, const Factor& y) const {
    SuperElement out(T_.gens());
    if (!x.odd && !y.odd) return out;
    if (x.odd && !y.odd) return in_.rho_bar[y.idx * in_.k + x.idx];
    if (!x.odd && y.odd) return -in_.rho_bar[x.idx * in_.k + y.idx];
    for (std::size_t g = 0; g < in_.k; ++g) {
      const SuperElement& c = in_.c_bar_at(x.idx, y.idx, g);
      if (!c.is_zero()) out += c * T_.upper(g);
    }
    return out;
  }

  // [PQ, R] = P [Q, R] + (-1)^{q (r - 1)} [P, R] Q ; [P, R] = -(-1)^{(p-1)(r-1)} [R, P]
  SuperElement mono(const std::vector<Factor>& P, const std::vector<Factor>& R) const {
    if (P.empty() || R.empty()) return SuperElement(T_.gens());
    if (P.size() == 1 && R.size() == 1) return base(P[0], R[0]);
    const int r = degree(R);
    if (P.size() == 1) {
      const int p = degree(P);
      SuperElement b = mono(R, P);
      return ((p - 1) * (r - 1)) % 2 == 0 ? -b : b;
    }
    std::vector<Factor> Q(P.begin() + 1, P.end());
    const int q = degree(Q);
    SuperElement out = element(P[0]) * mono(Q, R);
    SuperElement tail = mono({P[0]}, R);
    if (!tail.is_zero()) {
      tail = tail * product(P, 1);
      if ((q * (r - 1)) % 2 == 0)
        out += tail;
      else
        out -= tail;
    }
    return out;
  }

  const CourantInput& in_;
  const ThetaStructure& T_;
};

}  // namespace

SuperElement d_L_componentwise(const CourantInput& in, const ThetaStructure& T, const SuperElement& form) {
  require_form(T, form);
  const GeneratorSet& G = *T.gens();
  std::vector<SuperElement> q_img(in.m, SuperElement(T.gens())), a_img(in.k, SuperElement(T.gens()));
  for (std::size_t i = 0; i < in.m; ++i)
    for (std::size_t a = 0; a < in.k; ++a)
      if (!in.rho[i * in.k + a].is_zero()) q_img[i] += in.rho[i * in.k + a] * T.upper(a);
  for (std::size_t a = 0; a < in.k; ++a)
    for (std::size_t b = 0; b < in.k; ++b)
      for (std::size_t g = 0; g < in.k; ++g)
        if (!in.c_at(a, b, g).is_zero()) a_img[g] -= frac(1, 2) * in.c_at(a, b, g) * T.upper(a) * T.upper(b);
  std::vector<const SuperElement*> even(G.n_even(), nullptr), odd(G.n_odd(), nullptr);
  for (std::size_t i = 0; i < in.m; ++i) even[G.q(i)] = &q_img[i];
  for (std::size_t a = 0; a < in.k; ++a) odd[G.upper(a)] = &a_img[a];
  return apply_derivation(form, even, odd);
}

SuperElement dual_bracket_componentwise(const CourantInput& in, const ThetaStructure& T, const SuperElement& a,
                                        const SuperElement& b) {
  require_form(T, a);
  require_form(T, b);
  return Gerstenhaber(in, T).bracket(a, b);
}

SuperElement t_omega(const ThetaStructure& T, const SuperElement& omega) {
  require_form(T, omega);
  std::vector<SuperElement> w;
  for (std::size_t a = 0; a < T.k; ++a) w.push_back(insert_section(T, T.lower(a), omega));
  SuperElement out(T.gens());
  for (std::size_t a = 0; a < T.k; ++a)
    for (std::size_t b = a + 1; b < T.k; ++b) {
      SuperElement ab = courant_bracket(T, w[a], w[b]);
      for (std::size_t g = b + 1; g < T.k; ++g) {
        SuperElement v = pairing(T, ab, w[g]);
        if (!v.is_zero()) out += v * T.upper(a) * T.upper(b) * T.upper(g);
      }
    }
  return out;
}

SuperElement t_omega_nested(const ThetaStructure& T, const SuperElement& omega) {
  return frac(1, 6) * psi_triple(T, omega, omega, omega);
}

bool CourantReport::ok() const {
  if (!master.all_zero()) return false;
  for (const auto& c : identities)
    if (!c.ok()) return false;
  return true;
}

std::vector<SuperElement> section_family(const ThetaStructure& T, int degree, bool with_L, bool with_L_star) {
  std::vector<SuperElement> out;
  const auto mons = q_monomials(T.m, degree);
  for (const Monomial& x : mons) {
    SuperElement f = SuperElement::monomial(T.gens(), x, 1);
    if (with_L)
      for (std::size_t a = 0; a < T.k; ++a) out.push_back(f * T.lower(a));
    if (with_L_star)
      for (std::size_t a = 0; a < T.k; ++a) out.push_back(f * T.upper(a));
  }
  return out;
}

namespace {

std::vector<SuperElement> function_family(const ThetaStructure& T, int degree) {
  std::vector<SuperElement> out;
  for (const Monomial& x : q_monomials(T.m, degree)) out.push_back(SuperElement::monomial(T.gens(), x, 1));
  return out;
}

void record(IdentityCheck& c, const SuperElement& residual, const std::function<std::string()>& where) {
  ++c.checked;
  if (residual.is_zero()) return;
  c.max_terms = std::max(c.max_terms, residual.size());
  if (c.failures++ == 0) c.first_failure = where() + ": residual " + brief(residual);
}

// index triples: every frame triple, then a seeded sample over the whole family
std::vector<std::array<std::size_t, 3>> triples(std::size_t frame, std::size_t family, const SectionSampling& s) {
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t a = 0; a < frame; ++a)
    for (std::size_t b = 0; b < frame; ++b)
      for (std::size_t c = 0; c < frame; ++c) out.push_back({a, b, c});
  if (family > frame) {
    std::mt19937_64 rng(s.seed);
    std::uniform_int_distribution<std::size_t> pick(0, family - 1);
    for (std::size_t t = 0; t < s.max_triples; ++t) out.push_back({pick(rng), pick(rng), pick(rng)});
  }
  return out;
}

}  // namespace

CourantReport verify_courant(const ThetaStructure& T, const SectionSampling& s) {
  CourantReport rep;
  rep.master = master_residuals(T.ctx, T.theta);
  const auto fam = section_family(T, s.degree);
  const auto funcs = function_family(T, std::min(s.degree, 2));
  const std::size_t frame = 2 * T.k;
  auto name = [&](std::size_t i) { return "[" + fam[i].str() + "]"; };

  IdentityCheck jac{"jacobi"}, inv{"invariance"}, defect{"defect"}, leib{"leibniz"}, rho_d{"anchor_of_D"},
      hom{"anchor_homomorphism"};

  std::map<std::pair<std::size_t, std::size_t>, SuperElement> cache;
  auto br = [&](std::size_t i, std::size_t j) -> const SuperElement& {
    auto it = cache.find({i, j});
    if (it != cache.end()) return it->second;
    return cache.emplace(std::make_pair(i, j), courant_bracket(T, fam[i], fam[j])).first->second;
  };

  for (const auto& t : triples(frame, fam.size(), s)) {
    const std::size_t i = t[0], j = t[1], l = t[2];
    const SuperElement& e1 = fam[i];
    const SuperElement& e2 = fam[j];
    const SuperElement& e3 = fam[l];
    record(jac,
           courant_bracket(T, e1, br(j, l)) - courant_bracket(T, br(i, j), e3) - courant_bracket(T, e2, br(i, l)),
           [&] { return name(i) + name(j) + name(l); });
    record(inv, anchor_apply(T, e1, pairing(T, e2, e3)) - pairing(T, br(i, j), e3) - pairing(T, e2, br(i, l)),
           [&] { return name(i) + name(j) + name(l); });
  }
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (i >= frame && j >= frame && (i + j) % 3 != 0) continue;
      record(defect, br(i, j) + br(j, i) - big_d(T, pairing(T, fam[i], fam[j])), [&] { return name(i) + name(j); });
      for (const auto& f : funcs) {
        record(hom,
               anchor_apply(T, br(i, j), f) - anchor_apply(T, fam[i], anchor_apply(T, fam[j], f)) +
                   anchor_apply(T, fam[j], anchor_apply(T, fam[i], f)),
               [&] { return name(i) + name(j) + " on " + f.str(); });
        if (f.max_even_degree() <= 1)
          record(leib,
                 courant_bracket(T, fam[i], f * fam[j]) - f * br(i, j) - anchor_apply(T, fam[i], f) * fam[j],
                 [&] { return name(i) + name(j) + " with " + f.str(); });
      }
    }
  for (const auto& f : funcs)
    for (const auto& g : funcs)
      record(rho_d, anchor_apply(T, big_d(T, f), g), [&] { return "f = " + f.str() + ", g = " + g.str(); });
  rep.identities = {jac, inv, defect, leib, rho_d, hom};
  return rep;
}

void require_courant(const ThetaStructure& T, const SectionSampling& s) {
  CourantReport rep = verify_courant(T, s);
  if (!rep.master.all_zero())
    throw Error(Errc::AxiomViolation, "master equation fails: {Theta,Theta} = " + brief(rep.master.total));
  for (const auto& c : rep.identities)
    if (!c.ok()) throw Error(Errc::AxiomViolation, c.name + " fails at " + c.first_failure);
}

CourantReport quasi_lemma_check(const ThetaStructure& T, const SectionSampling& s) {
  CourantReport rep;
  rep.master = master_residuals(T.ctx, T.theta);
  const auto fam = section_family(T, s.degree, false, true);
  const auto funcs = function_family(T, std::min(s.degree, 2));
  const std::size_t frame = T.k;
  auto name = [&](std::size_t i) { return "[" + fam[i].str() + "]"; };
  auto rho = [&](const SuperElement& e, const SuperElement& f) { return anchor_apply(T, e, f); };
  auto star = [&](const SuperElement& a, const SuperElement& b) { return dual_bracket(T, a, b); };
  auto psi2 = [&](const SuperElement& a, const SuperElement& b) { return -project_L(T, courant_bracket(T, a, b)); };
  auto psi3 = [&](const SuperElement& a, const SuperElement& b, const SuperElement& c) {
    return -pairing(T, courant_bracket(T, a, b), c);
  };

  IdentityCheck one{"anchor_defect"}, two{"dual_jacobiator"}, three{"psi_coherence"};
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (i >= frame && j >= frame && (i + j) % 3 != 0) continue;
      const SuperElement& a = fam[i];
      const SuperElement& b = fam[j];
      for (const auto& f : funcs)
        record(one, rho(psi2(a, b), f) - rho(star(a, b), f) + rho(a, rho(b, f)) - rho(b, rho(a, f)),
               [&] { return name(i) + name(j) + " on " + f.str(); });
    }
  for (const auto& t : triples(frame, fam.size(), s)) {
    const std::size_t i = t[0], j = t[1], l = t[2];
    const SuperElement& a = fam[i];
    const SuperElement& b = fam[j];
    const SuperElement& c = fam[l];
    SuperElement lhs = star(star(a, b), c) + star(star(b, c), a) + star(star(c, a), b);
    SuperElement rhs = insert_section(T, psi2(a, b), d_L(T, c)) + insert_section(T, psi2(b, c), d_L(T, a)) +
                       insert_section(T, psi2(c, a), d_L(T, b)) + d_L(T, psi3(a, b, c));
    record(two, lhs - rhs, [&] { return name(i) + name(j) + name(l); });
  }
  {
    std::vector<std::array<std::size_t, 4>> quads;
    for (std::size_t a = 0; a < frame; ++a)
      for (std::size_t b = 0; b < frame; ++b)
        for (std::size_t c = 0; c < frame; ++c)
          for (std::size_t d = 0; d < frame; ++d) quads.push_back({a, b, c, d});
    std::mt19937_64 rng(s.seed + 1);
    std::uniform_int_distribution<std::size_t> pick(0, fam.size() - 1);
    for (std::size_t t = 0; t < s.max_triples / 2 && fam.size() > frame; ++t)
      quads.push_back({pick(rng), pick(rng), pick(rng), pick(rng)});
    for (const auto& qd : quads) {
      const std::size_t i = qd[0], j = qd[1], l = qd[2], n = qd[3];
      const SuperElement& a = fam[i];
      const SuperElement& b = fam[j];
      const SuperElement& c = fam[l];
      const SuperElement& d = fam[n];
      SuperElement r = rho(a, psi3(b, c, d)) - rho(b, psi3(a, c, d)) + rho(c, psi3(a, b, d)) - rho(d, psi3(a, b, c)) -
                       psi3(star(a, b), c, d) + psi3(star(a, c), b, d) - psi3(star(a, d), b, c) -
                       psi3(star(b, c), a, d) + psi3(star(b, d), a, c) - psi3(star(c, d), a, b);
      record(three, r, [&] { return name(i) + name(j) + name(l) + name(n); });
    }
  }
  rep.identities = {one, two, three};
  return rep;
}

SuperElement mc_residual(const ThetaStructure& T, const SuperElement& omega) {
  return d_L(T, omega) + frac(1, 2) * dual_bracket(T, omega, omega) + t_omega_nested(T, omega);
}

SuperElement mc_residual_componentwise(const CourantInput& in, const ThetaStructure& T, const SuperElement& omega) {
  return d_L_componentwise(in, T, omega) + frac(1, 2) * dual_bracket_componentwise(in, T, omega, omega) +
         t_omega(T, omega);
}

std::vector<SuperElement> mc_residual_series(const ThetaStructure& T, const std::vector<SuperElement>& omega) {
  const std::size_t N = omega.empty() ? 0 : omega.size() - 1;
  if (!omega.empty() && !omega[0].is_zero()) throw Error(Errc::Shape, "omega series must start at order one");
  std::vector<SuperElement> out(N + 1, SuperElement(T.gens()));
  std::vector<SuperElement> pw(N + 1, SuperElement(T.gens()));
  for (std::size_t i = 1; i <= N; ++i) pw[i] = rothstein(T.ctx, T.psi, omega[i]);
  for (std::size_t n = 1; n <= N; ++n) {
    out[n] = d_L(T, omega[n]);
    for (std::size_t i = 1; i < n; ++i)
      out[n] += frac(1, 2) * dual_bracket(T, omega[i], omega[n - i]);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; i + j < n; ++j) {
        SuperElement x = rothstein(T.ctx, pw[i], omega[j]);
        if (!x.is_zero()) out[n] += frac(1, 6) * rothstein(T.ctx, x, omega[n - i - j]);
      }
  }
  return out;
}

SuperElement d_omega(const ThetaStructure& T, const SuperElement& omega, const SuperElement& x) {
  return d_L(T, x) + dual_bracket(T, omega, x) +
         frac(1, 2) * rothstein(T.ctx, rothstein(T.ctx, rothstein(T.ctx, T.psi, omega), omega), x);
}

SuperElement universal_identity_residual(const ThetaStructure& T, const SuperElement& omega) {
  return d_omega(T, omega, mc_residual(T, omega));
}

const char* verdict_name(DiracVerdict v) {
  switch (v) {
    case DiracVerdict::Extends: return "EXTENDS";
    case DiracVerdict::Obstructed: return "OBSTRUCTED";
    case DiracVerdict::NoSolutionUpToDegree: return "NO_SOLUTION_UP_TO_DEGREE";
  }
  return "?";
}

namespace {

// basis of p-forms on L with coefficients among the given q-monomials
std::vector<SuperElement> form_basis(const ThetaStructure& T, int p, const std::vector<Monomial>& mons) {
  std::vector<SuperElement> out;
  for (std::uint64_t mask = 0; mask < (1ull << T.k); ++mask) {
    if (__builtin_popcountll(mask) != p) continue;
    for (const Monomial& x : mons) {
      Monomial y = x;
      y.odd = mask << T.k;
      out.push_back(SuperElement::monomial(T.gens(), y, 1));
    }
  }
  return out;
}

bool is_constant_input(const ThetaStructure& T) {
  if (T.m == 0) return true;
  // rho = 0 and constant structure functions: d_L acts on constant forms only
  const GeneratorSet& G = *T.gens();
  for (const auto& [mono, c] : T.mu.terms()) {
    for (std::size_t i = 0; i < 2 * G.base_dim(); ++i)
      if (mono.e[i]) return false;
  }
  for (const SuperElement* part : {&T.gamma, &T.psi})
    for (const auto& [mono, c] : part->terms())
      for (std::size_t i = 0; i < G.base_dim(); ++i)
        if (mono.e[i]) return false;
  return true;
}

std::size_t d_rank(const ThetaStructure& T, int p) {
  ColumnAssembler<Monomial> A;
  for (const auto& b : form_basis(T, p, {Monomial{}})) A.add_column(coords(d_L(T, b)));
  return A.n_cols() ? rank(A.matrix()) : 0;
}

}  // namespace

DiracCertificate deform_extend_dirac(const ThetaStructure& T, const std::vector<SuperElement>& omega,
                                     int degree_cap) {
  const std::size_t N = omega.size();
  for (const auto& w : omega) {
    require_form(T, w);
    if (q_degree(w) > degree_cap) throw Error(Errc::DegreeCapExceeded, "input order exceeds the degree cap");
  }
  std::vector<SuperElement> series{SuperElement(T.gens())};
  series.insert(series.end(), omega.begin(), omega.end());
  auto res = mc_residual_series(T, series);
  for (std::size_t n = 1; n <= N; ++n)
    if (!res[n].is_zero())
      throw Error(Errc::PreconditionMC, "Maurer-Cartan equation fails at order " + std::to_string(n));

  DiracCertificate c;
  c.order = N + 1;
  series.push_back(SuperElement(T.gens()));
  c.R = -mc_residual_series(T, series)[N + 1];
  c.d_R = d_L(T, c.R);
  if (!c.d_R.is_zero()) throw Error(Errc::PreconditionMC, "obstruction is not d_L-closed");

  bool constant = is_constant_input(T);
  for (const auto& w : omega) constant = constant && q_degree(w) == 0;
  c.constant_case = constant;
  const auto mons = constant ? std::vector<Monomial>{Monomial{}} : q_monomials(T.m, degree_cap);
  const auto basis = form_basis(T, 2, mons);
  ColumnAssembler<Monomial> A;
  for (const auto& b : basis) A.add_column(coords(d_L(T, b)));
  const auto rhs = coords(c.R);
  for (const auto& kv : rhs) A.row_of(kv.first);
  SolveResult s = solve(A.matrix(), A.vector(rhs));
  if (constant) {
    const std::size_t k3 = form_basis(T, 3, {Monomial{}}).size();
    c.h3_dim = k3 - d_rank(T, 3) - d_rank(T, 2);
  }
  if (s.consistent) {
    SuperElement sol(T.gens());
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (sgn(s.x[j]) != 0) sol += s.x[j] * basis[j];
    c.solution = sol;
    c.verdict = DiracVerdict::Extends;
  } else {
    c.witness = s.certificate;
    c.verdict = constant ? DiracVerdict::Obstructed : DiracVerdict::NoSolutionUpToDegree;
  }
  return c;
}

DiracDeformReport deform_dirac(const ThetaStructure& T, const SuperElement& omega1, std::size_t N, int degree_cap) {
  DiracDeformReport rep;
  rep.omega.push_back(omega1);
  auto first = mc_residual_series(T, {SuperElement(T.gens()), omega1});
  if (!first[1].is_zero()) throw Error(Errc::PreconditionMC, "omega_1 is not d_L-closed");
  rep.reached = 1;
  for (std::size_t n = 2; n <= N; ++n) {
    DiracCertificate c = deform_extend_dirac(T, rep.omega, degree_cap);
    rep.orders.push_back(c);
    if (!c.extends()) {
      rep.obstructed = true;
      return rep;
    }
    rep.omega.push_back(*c.solution);
    rep.reached = n;
  }
  return rep;
}

std::vector<SuperElement> form_matrix(const ThetaStructure& T, const SuperElement& omega) {
  require_form(T, omega);
  std::vector<SuperElement> M(T.k * T.k, SuperElement(T.gens()));
  for (std::size_t a = 0; a < T.k; ++a) {
    SuperElement col = insert_section(T, T.lower(a), omega);
    for (std::size_t b = 0; b < T.k; ++b) M[b * T.k + a] = insert_section(T, T.lower(b), col);
  }
  return M;
}

SuperElement form_from_matrix(const ThetaStructure& T, const std::vector<SuperElement>& W) {
  if (W.size() != T.k * T.k) throw Error(Errc::Shape, "form matrix must be k x k");
  SuperElement out(T.gens());
  for (std::size_t a = 0; a < T.k; ++a)
    for (std::size_t b = 0; b < T.k; ++b) {
      if (W[b * T.k + a] != -W[a * T.k + b]) throw Error(Errc::NotAntisymmetric, "form matrix is not antisymmetric");
      if (a < b && !W[b * T.k + a].is_zero()) out += W[b * T.k + a] * T.upper(a) * T.upper(b);
    }
  return out;
}

std::vector<SuperElement> bivector_matrix(const ThetaStructure& T, const SuperElement& lambda) {
  std::vector<SuperElement> M(T.k * T.k, SuperElement(T.gens()));
  for (std::size_t a = 0; a < T.k; ++a) {
    SuperElement col = rothstein(T.ctx, T.upper(a), lambda);
    for (std::size_t b = 0; b < T.k; ++b) M[b * T.k + a] = rothstein(T.ctx, T.upper(b), col);
  }
  return M;
}

SuperElement bivector_from_matrix(const ThetaStructure& T, const std::vector<SuperElement>& L) {
  if (L.size() != T.k * T.k) throw Error(Errc::Shape, "bivector matrix must be k x k");
  SuperElement out(T.gens());
  for (std::size_t a = 0; a < T.k; ++a)
    for (std::size_t b = 0; b < T.k; ++b) {
      if (L[b * T.k + a] != -L[a * T.k + b])
        throw Error(Errc::NotAntisymmetric, "bivector matrix is not antisymmetric");
      if (a < b && !L[b * T.k + a].is_zero()) out += L[b * T.k + a] * T.lower(a) * T.lower(b);
    }
  return out;
}

namespace {

using PolyMat = std::vector<SuperElement>;

PolyMat mat_mul(const PolyMat& A, const PolyMat& B, std::size_t k, const GenPtr& G) {
  PolyMat C(k * k, SuperElement(G));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (A[i * k + l].is_zero()) continue;
      for (std::size_t j = 0; j < k; ++j)
        if (!B[l * k + j].is_zero()) C[i * k + j] += A[i * k + l] * B[l * k + j];
    }
  return C;
}

}  // namespace

std::vector<SuperElement> reparametrize_complement(const ThetaStructure& T, const SuperElement& lambda,
                                                   const std::vector<SuperElement>& omega) {
  if (omega.empty()) return {};
  if (!omega[0].is_zero()) throw Error(Errc::Shape, "omega series must start at order one");
  const std::size_t N = omega.size() - 1, k = T.k;
  const GenPtr& G = T.gens();
  const PolyMat zero(k * k, SuperElement(G));
  const PolyMat Lm = bivector_matrix(T, lambda);
  std::vector<PolyMat> W(N + 1, zero);
  for (std::size_t n = 1; n <= N; ++n) W[n] = form_matrix(T, omega[n]);
  // W' = W - W' Lambda W, solved order by order
  std::vector<PolyMat> Wp(N + 1, zero);
  for (std::size_t n = 1; n <= N; ++n) {
    PolyMat cur = W[n];
    for (std::size_t i = 1; i < n; ++i) {
      PolyMat t = mat_mul(mat_mul(Wp[i], Lm, k, G), W[n - i], k, G);
      for (std::size_t e = 0; e < k * k; ++e) cur[e] -= t[e];
    }
    Wp[n] = cur;
  }
  std::vector<SuperElement> out(N + 1, SuperElement(G));
  for (std::size_t n = 1; n <= N; ++n) out[n] = form_from_matrix(T, Wp[n]);
  return out;
}

ThetaStructure change_complement(const ThetaStructure& T, const SuperElement& lambda) {
  ThetaStructure out = T;
  const SuperElement neg = -lambda;
  SuperElement term = T.theta, sum = T.theta;
  // exp(-ad_lambda) Theta; the series stops since each step raises the L-degree
  for (int j = 1; j <= 3; ++j) {
    term = frac(1, j) * rothstein(T.ctx, neg, term);
    if (term.is_zero()) break;
    sum += term;
  }
  ThetaParts p = split_theta(sum);
  out.theta = sum;
  out.phi = p.phi;
  out.mu = p.mu;
  out.gamma = p.gamma;
  out.psi = p.psi;
  return out;
}

}  // namespace dirdef
