#include "dirdef/grassmann.hpp"

namespace dirdef {

namespace {

int pow_sign(long e) { return e % 2 == 0 ? 1 : -1; }

void check_same(const GrassmannDerivation& a, const GrassmannDerivation& b) {
  if (a.base_dim() != b.base_dim() || a.rank() != b.rank())
    throw Error(Errc::BundleMismatch, "derivations of different form algebras");
}

SuperElement theta_product(const GenPtr& gs, const std::vector<int>& B) {
  SuperElement w = SuperElement::constant(gs, 1);
  for (int b : B) w = w * SuperElement::odd_gen(gs, std::size_t(b));
  return w;
}

}  // namespace

GrassmannDerivation::GrassmannDerivation(int degree, std::size_t m, std::size_t k)
    : p_(degree), m_(m), k_(k), gs_(GeneratorSet::grassmann(m, k)) {
  if (degree < -1) throw Error(Errc::Shape, "derivation degree below -1");
  fx_.assign(m, SuperElement(gs_));
  fth_.assign(k, SuperElement(gs_));
}

SuperElement GrassmannDerivation::apply(const SuperElement& w) const {
  std::vector<const SuperElement*> ev, od;
  for (const auto& x : fx_) ev.push_back(&x);
  for (const auto& x : fth_) od.push_back(&x);
  return apply_derivation(w, ev, od);
}

bool GrassmannDerivation::operator==(const GrassmannDerivation& o) const {
  return p_ == o.p_ && m_ == o.m_ && k_ == o.k_ && fx_ == o.fx_ && fth_ == o.fth_;
}

GrassmannDerivation& GrassmannDerivation::operator+=(const GrassmannDerivation& o) {
  check_same(*this, o);
  if (p_ != o.p_) throw Error(Errc::Shape, "sum of derivations of different degree");
  for (std::size_t i = 0; i < m_; ++i) fx_[i] += o.fx_[i];
  for (std::size_t a = 0; a < k_; ++a) fth_[a] += o.fth_[a];
  return *this;
}

GrassmannDerivation& GrassmannDerivation::operator*=(const Rational& c) {
  for (auto& x : fx_) x = x * c;
  for (auto& x : fth_) x = x * c;
  return *this;
}

bool GrassmannDerivation::is_zero() const {
  for (const auto& x : fx_)
    if (!x.is_zero()) return false;
  for (const auto& x : fth_)
    if (!x.is_zero()) return false;
  return true;
}

GrassmannDerivation commutator(const GrassmannDerivation& A, const GrassmannDerivation& B) {
  check_same(A, B);
  const long p = A.degree(), q = B.degree();
  if (p + q < -1) return GrassmannDerivation(-1, A.base_dim(), A.rank());  // zero
  GrassmannDerivation r(int(p + q), A.base_dim(), A.rank());
  const Rational s = pow_sign(p * q);
  for (std::size_t i = 0; i < A.base_dim(); ++i)
    r.on_function(i) = A.apply(B.on_function(i)) - s * B.apply(A.on_function(i));
  for (std::size_t a = 0; a < A.rank(); ++a)
    r.on_generator(a) = A.apply(B.on_generator(a)) - s * B.apply(A.on_generator(a));
  return r;
}

SuperElement lift_function(const SuperElement& f, const GenPtr& forms) {
  std::vector<int> ev(f.gens()->n_even());
  for (std::size_t i = 0; i < ev.size(); ++i) ev[i] = int(i);
  return remap(f, forms, ev, {});
}

SuperElement lower_function(const SuperElement& f, const GenPtr& ring) {
  std::vector<int> ev(f.gens()->n_even()), od(f.gens()->n_odd(), -1);
  for (std::size_t i = 0; i < ev.size(); ++i) ev[i] = int(i);
  return remap(f, ring, ev, od);
}

SuperElement form_eval(const SuperElement& omega, const std::vector<Section>& args) {
  SuperElement w = omega;
  for (const Section& s : args) {
    SuperElement r(omega.gens());
    for (std::size_t a = 0; a < s.size(); ++a)
      if (!s[a].is_zero()) r += lift_function(s[a], omega.gens()) * partial_odd(w, a);
    w = r;
  }
  return w;
}

SuperElement form_from_values(const GenPtr& gs, std::size_t r, const std::vector<SuperElement>& values) {
  const std::size_t k = gs->n_odd();
  const auto& tup = sorted_tuples(r, k);
  if (values.size() != tup.size()) throw Error(Errc::Shape, "one value per sorted tuple expected");
  SuperElement w(gs);
  for (std::size_t t = 0; t < tup.size(); ++t)
    if (!values[t].is_zero()) w += lift_function(values[t], gs) * theta_product(gs, tup[t]);
  return w;
}

GrassmannDerivation grassmann_L(const MultiDerivation& D) {
  const int p = D.degree();
  if (p < -1) throw Error(Errc::Shape, "zero multiderivation has no degree");
  GrassmannDerivation L(p, D.base_dim(), D.rank());
  const GenPtr& gs = L.algebra();
  if (p >= 0) {
    const auto& st = sorted_tuples(std::size_t(p), D.rank());
    for (std::size_t t = 0; t < st.size(); ++t) {
      SuperElement w = theta_product(gs, st[t]);
      for (std::size_t j = 0; j < D.base_dim(); ++j)
        if (!D.sigma(t, j).is_zero()) L.on_function(j) += lift_function(D.sigma(t, j), gs) * w;
    }
  }
  const auto& dt = sorted_tuples(std::size_t(p + 1), D.rank());
  for (std::size_t t = 0; t < dt.size(); ++t) {
    SuperElement w = theta_product(gs, dt[t]);
    for (std::size_t a = 0; a < D.rank(); ++a)
      if (!D.d(t, a).is_zero()) L.on_generator(a) -= lift_function(D.d(t, a), gs) * w;
  }
  return L;
}

MultiDerivation grassmann_R(const GrassmannDerivation& Dg) {
  const int p = Dg.degree();
  const std::size_t m = Dg.base_dim(), k = Dg.rank();
  MultiDerivation D(p, m, k);
  const auto& dt = sorted_tuples(std::size_t(p + 1), k);
  for (std::size_t t = 0; t < dt.size(); ++t) {
    std::vector<Section> args;
    for (int b : dt[t]) args.push_back(frame_section(D.ring(), k, std::size_t(b)));
    for (std::size_t a = 0; a < k; ++a)
      D.d(t, a) = lower_function(form_eval(Dg.on_generator(a), args) * Rational(-1), D.ring());
  }
  if (p >= 0) {
    const auto& st = sorted_tuples(std::size_t(p), k);
    for (std::size_t t = 0; t < st.size(); ++t) {
      std::vector<Section> args;
      for (int b : st[t]) args.push_back(frame_section(D.ring(), k, std::size_t(b)));
      for (std::size_t j = 0; j < m; ++j) D.sigma(t, j) = lower_function(form_eval(Dg.on_function(j), args), D.ring());
    }
  }
  return D;
}

GrassmannDerivation algebroid_differential(const MultiDerivation& m) {
  if (m.degree() != 1) throw Error(Errc::Shape, "a Lie algebroid structure is a degree 1 multiderivation");
  return grassmann_L(m);
}

GrassmannDerivation de_rham(std::size_t m) { return grassmann_L(MultiDerivation::vector_field_bracket(m)); }

GrassmannDerivation insertion(const std::vector<SuperElement>& K, std::size_t m, int r) {
  GrassmannDerivation I(r - 1, m, K.size());
  for (std::size_t a = 0; a < K.size(); ++a) {
    if (!K[a].is_zero() && (K[a].parity() < 0 || K[a].max_odd_degree() != r))
      throw Error(Errc::Shape, "vector-valued form is not homogeneous of the stated degree");
    I.on_generator(a) = K[a];
  }
  return I;
}

GrassmannDerivation lie_derivative(const std::vector<SuperElement>& K, int r, const GrassmannDerivation& d) {
  return commutator(insertion(K, d.base_dim(), r), d);
}

Decomposition algebraic_decompose(const GrassmannDerivation& D) {
  const std::size_t m = D.base_dim();
  if (D.rank() != m) throw Error(Errc::AnchorNotSurjective, "decomposition implemented for E = TM only");
  GrassmannDerivation d = de_rham(m);
  Decomposition out;
  for (std::size_t j = 0; j < m; ++j) out.K.push_back(D.on_function(j));
  GrassmannDerivation rest = D;
  if (D.degree() >= 0) rest += Rational(-1) * lie_derivative(out.K, D.degree(), d);
  for (std::size_t j = 0; j < m; ++j) out.L.push_back(rest.on_generator(j));
  return out;
}

}  // namespace dirdef
