#include "dirdef/multideriv.hpp"

#include <functional>

namespace dirdef {

namespace {

int pow_sign(long e) { return e % 2 == 0 ? 1 : -1; }

std::size_t count_tuples(int size, std::size_t dim) {
  if (size < 0) return 0;
  return sorted_tuples(std::size_t(size), dim).size();
}

Section zero_section(const GenPtr& ring, std::size_t k) { return Section(k, SuperElement(ring)); }
VectorField zero_field(const GenPtr& ring, std::size_t m) { return VectorField(m, SuperElement(ring)); }

void add_scaled(Section& acc, const SuperElement& f, const Section& v) {
  for (std::size_t g = 0; g < acc.size(); ++g)
    if (!v[g].is_zero()) acc[g] += f * v[g];
}

// iterate over all combinations of nonzero frame components of the given sections
void for_each_expansion(const std::vector<Section>& args,
                        const std::function<void(const std::vector<int>&, const std::vector<const SuperElement*>&)>& f) {
  std::vector<int> idx(args.size());
  std::vector<const SuperElement*> coef(args.size());
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == args.size()) {
      f(idx, coef);
      return;
    }
    for (std::size_t a = 0; a < args[j].size(); ++a) {
      if (args[j][a].is_zero()) continue;
      idx[j] = int(a);
      coef[j] = &args[j][a];
      rec(j + 1);
    }
  };
  rec(0);
}

// shuffles of positions {0..n-1}: the first `first` chosen positions, the rest, and the sign
void for_each_shuffle(std::size_t n, int first,
                      const std::function<void(const std::vector<int>&, const std::vector<int>&, int)>& f) {
  if (first < 0 || std::size_t(first) > n) return;
  for (const auto& sel : sorted_tuples(std::size_t(first), n)) {
    std::vector<bool> in(n, false);
    std::size_t inv = 0;
    for (std::size_t t = 0; t < sel.size(); ++t) {
      in[sel[t]] = true;
      inv += std::size_t(sel[t]) - t;
    }
    std::vector<int> rest;
    for (std::size_t i = 0; i < n; ++i)
      if (!in[i]) rest.push_back(int(i));
    f(sel, rest, pow_sign(long(inv)));
  }
}

std::vector<Section> pick(const std::vector<Section>& args, const std::vector<int>& pos) {
  std::vector<Section> out;
  for (int p : pos) out.push_back(args[std::size_t(p)]);
  return out;
}

void check_bundle(const MultiDerivation& a, const MultiDerivation& b) {
  if (a.base_dim() != b.base_dim() || a.rank() != b.rank())
    throw Error(Errc::BundleMismatch, "multiderivations on different bundles");
}

std::vector<Section> frames(const GenPtr& ring, std::size_t k, const std::vector<int>& idx) {
  std::vector<Section> out;
  for (int a : idx) out.push_back(frame_section(ring, k, std::size_t(a)));
  return out;
}

Section bracket_eval(const MultiDerivation& D1, const MultiDerivation& D2, const std::vector<Section>& args) {
  const long p = D1.degree(), q = D2.degree();
  Section r = cm_compose_eval(D1, D2, args);
  for (auto& x : r) x *= Rational(pow_sign(p * q));
  Section b = cm_compose_eval(D2, D1, args);
  for (std::size_t g = 0; g < r.size(); ++g) r[g] -= b[g];
  return r;
}

MultiDerivation bracket_frame_part(const MultiDerivation& D1, const MultiDerivation& D2) {
  check_bundle(D1, D2);
  const int n = D1.degree() + D2.degree();
  const std::size_t m = D1.base_dim(), k = D1.rank();
  if (D1.degree() < -1 || D2.degree() < -1 || n < -1) return MultiDerivation(-2, m, k);
  MultiDerivation r(n, m, k);
  const auto& tup = sorted_tuples(std::size_t(n + 1), k);
  for (std::size_t t = 0; t < tup.size(); ++t) {
    Section v = bracket_eval(D1, D2, frames(D1.ring(), k, tup[t]));
    for (std::size_t g = 0; g < k; ++g) r.d(t, g) = v[g];
  }
  return r;
}

SuperElement to_ring(const SuperElement& a, const GenPtr& ring, std::size_t m) {
  std::vector<int> ev(a.gens()->n_even(), -1), od(a.gens()->n_odd(), -1);
  for (std::size_t i = 0; i < m; ++i) ev[i] = int(i);
  return remap(a, ring, ev, od);
}

SuperElement from_ring(const SuperElement& a, const GenPtr& target, std::size_t m) {
  std::vector<int> ev(m);
  for (std::size_t i = 0; i < m; ++i) ev[i] = int(i);
  return remap(a, target, ev, {});
}

}  // namespace

SuperElement apply_vector_field(const VectorField& X, const SuperElement& f) {
  SuperElement r(f.gens());
  for (std::size_t i = 0; i < X.size(); ++i)
    if (!X[i].is_zero()) r += X[i] * partial_even(f, i);
  return r;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  VectorField r(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) r[i] = apply_vector_field(X, Y[i]) - apply_vector_field(Y, X[i]);
  return r;
}

Section frame_section(const GenPtr& ring, std::size_t k, std::size_t a) {
  Section s = zero_section(ring, k);
  s[a] = SuperElement::constant(ring, 1);
  return s;
}

MultiDerivation::MultiDerivation(int n, std::size_t m, std::size_t k)
    : n_(n), m_(m), k_(k), ring_(GeneratorSet::polynomial(m)) {
  if (n < -2) throw Error(Errc::Shape, "multiderivation degree below -2");
  d_.assign(n_d_tuples() * k, SuperElement(ring_));
  s_.assign(n_sigma_tuples() * m, SuperElement(ring_));
}

std::size_t MultiDerivation::n_d_tuples() const { return count_tuples(n_ + 1, k_); }
std::size_t MultiDerivation::n_sigma_tuples() const { return n_ >= 0 ? count_tuples(n_, k_) : 0; }

MultiDerivation MultiDerivation::section(std::size_t m, const Section& s) {
  MultiDerivation D(-1, m, s.size());
  for (std::size_t g = 0; g < s.size(); ++g) D.d(0, g) = to_ring(s[g], D.ring_, m);
  return D;
}

MultiDerivation MultiDerivation::from_multimap(const MultiMap& f) {
  MultiDerivation D(int(f.arity()) - 1, 0, f.dim());
  for (std::size_t t = 0; t < D.n_d_tuples(); ++t)
    for (std::size_t g = 0; g < f.dim(); ++g)
      if (sgn(f.at(t, g)) != 0) D.d(t, g) = SuperElement::constant(D.ring_, f.at(t, g));
  return D;
}

MultiMap MultiDerivation::to_multimap() const {
  if (m_ != 0 || n_ < -1) throw Error(Errc::Shape, "only point-case multiderivations are multilinear maps");
  MultiMap f(std::size_t(n_ + 1), k_);
  for (std::size_t t = 0; t < n_d_tuples(); ++t)
    for (std::size_t g = 0; g < k_; ++g) {
      const auto& terms = d(t, g).terms();
      if (!terms.empty()) f.at(t, g) = terms.begin()->second;
    }
  return f;
}

MultiDerivation MultiDerivation::vector_field_bracket(std::size_t m) {
  MultiDerivation D(1, m, m);
  for (std::size_t i = 0; i < m; ++i) D.sigma(i, i) = SuperElement::constant(D.ring_, 1);
  return D;
}

Section MultiDerivation::eval_frame(const std::vector<int>& idx) const {
  Section out = zero_section(ring_, k_);
  if (n_ < -1) return out;
  if (idx.size() != std::size_t(n_ + 1)) throw Error(Errc::Shape, "wrong number of sections");
  std::vector<int> s = idx;
  int sign = sort_with_sign(s);
  if (sign == 0) return out;
  std::size_t t = tuple_index(s, k_);
  for (std::size_t g = 0; g < k_; ++g) out[g] = Rational(sign) * d(t, g);
  return out;
}

VectorField MultiDerivation::symbol_frame(const std::vector<int>& idx) const {
  VectorField out = zero_field(ring_, m_);
  if (n_ < 0) return out;
  if (idx.size() != std::size_t(n_)) throw Error(Errc::Shape, "wrong number of sections for the symbol");
  std::vector<int> s = idx;
  int sign = sort_with_sign(s);
  if (sign == 0) return out;
  std::size_t t = tuple_index(s, k_);
  for (std::size_t i = 0; i < m_; ++i) out[i] = Rational(sign) * sigma(t, i);
  return out;
}

Section MultiDerivation::eval(const std::vector<Section>& args) const {
  Section out = zero_section(ring_, k_);
  if (n_ < -1) return out;
  if (args.size() != std::size_t(n_ + 1)) throw Error(Errc::Shape, "wrong number of sections");
  const std::size_t n1 = args.size();
  for_each_expansion(args, [&](const std::vector<int>& a, const std::vector<const SuperElement*>& f) {
    SuperElement prod = SuperElement::constant(ring_, 1);
    for (auto* x : f) prod = prod * *x;
    add_scaled(out, prod, eval_frame(a));
    for (std::size_t i = 0; i < n1; ++i) {
      std::vector<int> rest;
      SuperElement pf = SuperElement::constant(ring_, 1);
      for (std::size_t j = 0; j < n1; ++j)
        if (j != i) {
          rest.push_back(a[j]);
          pf = pf * *f[j];
        }
      SuperElement df = apply_vector_field(symbol_frame(rest), *f[i]);
      if (df.is_zero()) continue;
      out[std::size_t(a[i])] += Rational(pow_sign(long(n1 - 1 - i))) * pf * df;
    }
  });
  return out;
}

VectorField MultiDerivation::symbol(const std::vector<Section>& args) const {
  VectorField out = zero_field(ring_, m_);
  if (n_ < 0) return out;
  if (args.size() != std::size_t(n_)) throw Error(Errc::Shape, "wrong number of sections for the symbol");
  for_each_expansion(args, [&](const std::vector<int>& a, const std::vector<const SuperElement*>& f) {
    SuperElement prod = SuperElement::constant(ring_, 1);
    for (auto* x : f) prod = prod * *x;
    VectorField v = symbol_frame(a);
    for (std::size_t i = 0; i < m_; ++i)
      if (!v[i].is_zero()) out[i] += prod * v[i];
  });
  return out;
}

bool MultiDerivation::is_zero() const {
  for (const auto& x : d_)
    if (!x.is_zero()) return false;
  for (const auto& x : s_)
    if (!x.is_zero()) return false;
  return true;
}

bool MultiDerivation::operator==(const MultiDerivation& o) const {
  return n_ == o.n_ && m_ == o.m_ && k_ == o.k_ && d_ == o.d_ && s_ == o.s_;
}

MultiDerivation& MultiDerivation::operator+=(const MultiDerivation& o) {
  check_bundle(*this, o);
  if (n_ != o.n_) throw Error(Errc::Shape, "sum of multiderivations of different degree");
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
  for (std::size_t i = 0; i < s_.size(); ++i) s_[i] += o.s_[i];
  return *this;
}

MultiDerivation& MultiDerivation::operator*=(const Rational& c) {
  for (auto& x : d_) x *= c;
  for (auto& x : s_) x *= c;
  if (sgn(c) == 0) {
    for (auto& x : d_) x = SuperElement(ring_);
    for (auto& x : s_) x = SuperElement(ring_);
  }
  return *this;
}

MultiDerivation MultiDerivation::extend_rank() const {
  MultiDerivation r(n_, m_, k_ + 1);
  if (n_ < -1) return r;
  const auto& tup = sorted_tuples(std::size_t(n_ + 1), k_);
  for (std::size_t t = 0; t < tup.size(); ++t) {
    std::size_t u = tuple_index(tup[t], k_ + 1);
    for (std::size_t g = 0; g < k_; ++g) r.d(u, g) = d(t, g);
  }
  if (n_ >= 0) {
    const auto& st = sorted_tuples(std::size_t(n_), k_);
    for (std::size_t t = 0; t < st.size(); ++t) {
      std::size_t u = tuple_index(st[t], k_ + 1);
      for (std::size_t i = 0; i < m_; ++i) r.sigma(u, i) = sigma(t, i);
    }
  }
  return r;
}

Section cm_compose_eval(const MultiDerivation& D1, const MultiDerivation& D2, const std::vector<Section>& args) {
  check_bundle(D1, D2);
  const int p = D1.degree(), q = D2.degree();
  Section out = zero_section(D1.ring(), D1.rank());
  if (p < 0 || q < -1) return out;
  if (args.size() != std::size_t(p + q + 1)) throw Error(Errc::Shape, "wrong number of sections");
  for_each_shuffle(args.size(), q + 1, [&](const std::vector<int>& sel, const std::vector<int>& rest, int sign) {
    std::vector<Section> a1{D2.eval(pick(args, sel))};
    for (int r : rest) a1.push_back(args[std::size_t(r)]);
    Section v = D1.eval(a1);
    for (std::size_t g = 0; g < out.size(); ++g)
      if (!v[g].is_zero()) out[g] += Rational(sign) * v[g];
  });
  return out;
}

MultiDerivation cm_bracket(const MultiDerivation& D1, const MultiDerivation& D2) {
  MultiDerivation r = bracket_frame_part(D1, D2);
  const int n = r.degree();
  if (n < 0 || r.base_dim() == 0) return r;
  const std::size_t m = r.base_dim(), k = r.rank();
  MultiDerivation E1 = D1.extend_rank(), E2 = D2.extend_rank();
  const GenPtr& ring = E1.ring();
  const auto& tup = sorted_tuples(std::size_t(n), k);
  for (std::size_t t = 0; t < tup.size(); ++t) {
    std::vector<Section> args = frames(ring, k + 1, tup[t]);
    args.push_back(frame_section(ring, k + 1, k));
    SuperElement base = bracket_eval(E1, E2, args)[k];
    for (std::size_t i = 0; i < m; ++i) {
      SuperElement xi = SuperElement::even_gen(ring, i);
      args.back()[k] = xi;
      SuperElement v = bracket_eval(E1, E2, args)[k] - xi * base;
      r.sigma(t, i) = v;
    }
  }
  return r;
}

MultiDerivation cm_bracket_symbol_law(const MultiDerivation& D1, const MultiDerivation& D2) {
  MultiDerivation r = bracket_frame_part(D1, D2);
  const int n = r.degree();
  if (n < 0 || r.base_dim() == 0) return r;
  const long p = D1.degree(), q = D2.degree();
  const std::size_t m = r.base_dim(), k = r.rank();
  const GenPtr& ring = r.ring();
  const auto& tup = sorted_tuples(std::size_t(n), k);
  for (std::size_t t = 0; t < tup.size(); ++t) {
    std::vector<Section> args = frames(ring, k, tup[t]);
    VectorField acc = zero_field(ring, m);
    auto add = [&](const VectorField& v, int sign) {
      for (std::size_t i = 0; i < m; ++i)
        if (!v[i].is_zero()) acc[i] += Rational(sign) * v[i];
    };
    // sigma_1 o D_2 and sigma_2 o D_1
    auto sym_comp = [&](const MultiDerivation& A, const MultiDerivation& B, int outer) {
      if (A.degree() < 1) return;
      for_each_shuffle(args.size(), B.degree() + 1, [&](const std::vector<int>& sel, const std::vector<int>& rest, int s) {
        std::vector<Section> a{B.eval(pick(args, sel))};
        for (int x : rest) a.push_back(args[std::size_t(x)]);
        add(A.symbol(a), s * outer);
      });
    };
    sym_comp(D1, D2, pow_sign(p * q));
    sym_comp(D2, D1, -1);
    if (p >= 0 && q >= 0)
      for_each_shuffle(args.size(), int(p), [&](const std::vector<int>& sel, const std::vector<int>& rest, int s) {
        add(lie_bracket(D1.symbol(pick(args, sel)), D2.symbol(pick(args, rest))), s);
      });
    for (std::size_t i = 0; i < m; ++i) r.sigma(t, i) = acc[i];
  }
  return r;
}

std::pair<std::size_t, std::size_t> schouten_dims(const GeneratorSet& gs) {
  std::size_t m = 0, k = 0;
  for (std::size_t i = 0; i < gs.n_even(); ++i) {
    if (gs.even(i).kind == EvenKind::Base) ++m;
    else if (gs.even(i).kind == EvenKind::Fiber) ++k;
    else throw Error(Errc::WrongContext, "not a multivector generator set");
  }
  if (!gs.same_as(*GeneratorSet::schouten(m, k))) throw Error(Errc::WrongContext, "not a multivector generator set");
  return {m, k};
}

MultiDerivation iso_I(const SuperElement& P, int j) {
  if (!P.gens()) throw Error(Errc::NotHomogeneous, "empty element");
  auto [m, k] = schouten_dims(*P.gens());
  for (const auto& [mono, c] : P.terms()) {
    int nx = 0, nv = 0, deg_v = 0;
    for (std::size_t i = 0; i < m; ++i) nx += (mono.odd >> i) & 1;
    for (std::size_t a = 0; a < k; ++a) {
      nv += (mono.odd >> (m + a)) & 1;
      deg_v += mono.e[m + a];
    }
    int od = nx + nv;
    if (j < 0) j = od;
    if (od != j || nx > 1 || deg_v != 1 - nx)
      throw Error(Errc::NotHomogeneous, "element is not in X^{j,1-j}(E*)");
  }
  if (j < 0) throw Error(Errc::NotHomogeneous, "degree of the zero element must be given");
  // i_{X1 ^ ... ^ Xj} = i_{X1} ... i_{Xj}
  const Rational eps = pow_sign(long(j) * (j - 1) / 2);
  MultiDerivation D(j - 1, m, k);
  const auto& dt = sorted_tuples(std::size_t(j), k);
  for (std::size_t t = 0; t < dt.size(); ++t) {
    SuperElement Q = P;
    for (int a : dt[t]) Q = partial_odd(Q, m + std::size_t(a));
    for (std::size_t g = 0; g < k; ++g) D.d(t, g) = eps * to_ring(partial_even(Q, m + g), D.ring(), m);
  }
  if (j >= 1) {
    const auto& st = sorted_tuples(std::size_t(j - 1), k);
    for (std::size_t t = 0; t < st.size(); ++t) {
      SuperElement Q = P;
      for (int a : st[t]) Q = partial_odd(Q, m + std::size_t(a));
      for (std::size_t i = 0; i < m; ++i) D.sigma(t, i) = eps * to_ring(partial_odd(Q, i), D.ring(), m);
    }
  }
  return D;
}

SuperElement iso_I_inv(const MultiDerivation& D, const GenPtr& S) {
  auto [m, k] = schouten_dims(*S);
  if (m != D.base_dim() || k != D.rank()) throw Error(Errc::BundleMismatch, "generator set does not match the bundle");
  SuperElement P(S);
  const int n = D.degree();
  if (n < -1) return P;
  const Rational eps = pow_sign(long(n + 1) * n / 2);
  auto wedge = [&](const std::vector<int>& A) {
    SuperElement w = SuperElement::constant(S, 1);
    for (int a : A) w = w * SuperElement::odd_gen(S, m + std::size_t(a));
    return w;
  };
  const auto& dt = sorted_tuples(std::size_t(n + 1), k);
  for (std::size_t t = 0; t < dt.size(); ++t) {
    SuperElement w = wedge(dt[t]);
    for (std::size_t g = 0; g < k; ++g)
      if (!D.d(t, g).is_zero()) P += eps * from_ring(D.d(t, g), S, m) * SuperElement::even_gen(S, m + g) * w;
  }
  if (n >= 0) {
    const auto& st = sorted_tuples(std::size_t(n), k);
    for (std::size_t t = 0; t < st.size(); ++t) {
      SuperElement w = wedge(st[t]);
      for (std::size_t i = 0; i < m; ++i)
        if (!D.sigma(t, i).is_zero()) P += eps * from_ring(D.sigma(t, i), S, m) * w * SuperElement::odd_gen(S, i);
    }
  }
  return P;
}

std::vector<SuperElement> monomials_upto(const GenPtr& ring, int deg) {
  std::vector<SuperElement> out;
  const std::size_t m = ring->n_even();
  Monomial mono;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == m) {
      out.push_back(SuperElement::monomial(ring, mono, 1));
      return;
    }
    for (int e = 0; e <= left; ++e) {
      mono.e[i] = std::uint8_t(e);
      rec(i + 1, left - e);
    }
    mono.e[i] = 0;
  };
  if (deg >= 0) rec(0, deg);
  return out;
}

}  // namespace dirdef
