#include "dirdef/brackets.hpp"

namespace dirdef {

ConnectionData::ConnectionData(GenPtr gs) : gs_(std::move(gs)) {
  g_.assign(m() * k() * k(), SuperElement(gs_));
}

bool ConnectionData::is_flat() const {
  for (const auto& g : g_)
    if (!g.is_zero()) return false;
  return true;
}

SuperElement ConnectionData::curvature(std::size_t beta, std::size_t alpha, std::size_t i, std::size_t j) const {
  const GeneratorSet& G = *gs_;
  SuperElement r = partial_even(gamma(j, alpha, beta), G.q(i)) - partial_even(gamma(i, alpha, beta), G.q(j));
  for (std::size_t c = 0; c < k(); ++c) {
    r += gamma(i, c, beta) * gamma(j, alpha, c);
    r -= gamma(j, c, beta) * gamma(i, alpha, c);
  }
  return r;
}

BracketContext BracketContext::schouten(GenPtr gs) {
  BracketContext c;
  c.kind_ = BracketKind::Schouten;
  c.gs_ = std::move(gs);
  return c;
}

BracketContext BracketContext::rothstein(const ConnectionData& conn) {
  BracketContext c;
  c.kind_ = BracketKind::Rothstein;
  c.gs_ = conn.gens();
  c.conn_ = conn;
  const GeneratorSet& G = *c.gs_;
  const std::size_t m = G.base_dim(), k = G.pairs();
  c.nabla_odd_.assign(m, std::vector<SuperElement>(G.n_odd(), SuperElement(c.gs_)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      SuperElement lo(c.gs_), up(c.gs_);
      for (std::size_t b = 0; b < k; ++b) {
        lo += conn.gamma(i, a, b) * SuperElement::odd_gen(c.gs_, G.lower(b));
        up -= conn.gamma(i, b, a) * SuperElement::odd_gen(c.gs_, G.upper(b));
      }
      c.nabla_odd_[i][G.lower(a)] = lo;
      c.nabla_odd_[i][G.upper(a)] = up;
    }
  }
  c.curv_.assign(m * m, SuperElement(c.gs_));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      SuperElement r(c.gs_);
      for (std::size_t al = 0; al < k; ++al)
        for (std::size_t be = 0; be < k; ++be) {
          SuperElement R = conn.curvature(al, be, i, j);
          if (R.is_zero()) continue;
          r += R * SuperElement::odd_gen(c.gs_, G.lower(al)) * SuperElement::odd_gen(c.gs_, G.upper(be));
        }
      c.curv_[i * m + j] = r;
    }
  return c;
}

BracketContext BracketContext::point(std::size_t k) {
  BracketContext c = rothstein(ConnectionData::flat(GeneratorSet::rothstein(0, k)));
  c.kind_ = BracketKind::PointBig;
  return c;
}

SuperElement BracketContext::nabla(std::size_t i, const SuperElement& phi) const {
  if (!conn_) throw Error(Errc::MissingConnection, "nabla needs a connection");
  SuperElement r = partial_even(phi, gs_->q(i));
  for (std::size_t j = 0; j < gs_->n_odd(); ++j) {
    const SuperElement& img = nabla_odd_[i][j];
    if (img.is_zero()) continue;
    SuperElement d = partial_odd(phi, j);
    if (!d.is_zero()) r += img * d;
  }
  return r;
}

SuperElement schouten(const BracketContext& ctx, const SuperElement& P, const SuperElement& Q) {
  if (ctx.kind() != BracketKind::Schouten) throw Error(Errc::WrongContext, "schouten needs a SCHOUTEN context");
  const GeneratorSet& G = *ctx.gens();
  SuperElement r(ctx.gens());
  if (P.is_zero() || Q.is_zero()) return r;
  for (std::size_t j = 0; j < G.n_odd(); ++j) {
    if (G.odd(j).kind != OddKind::Conj) continue;
    std::size_t y = std::size_t(G.odd(j).partner);
    SuperElement a = partial_odd_right(P, j);
    if (!a.is_zero()) {
      SuperElement b = partial_even(Q, y);
      if (!b.is_zero()) r += a * b;
    }
    SuperElement c = partial_even(P, y);
    if (!c.is_zero()) {
      SuperElement d = partial_odd(Q, j);
      if (!d.is_zero()) r -= c * d;
    }
  }
  return r;
}

SuperElement rothstein(const BracketContext& ctx, const SuperElement& phi, const SuperElement& psi) {
  if (ctx.kind() == BracketKind::Schouten) throw Error(Errc::WrongContext, "rothstein needs a ROTHSTEIN context");
  if (!ctx.connection()) throw Error(Errc::MissingConnection, "rothstein bracket without connection data");
  const GeneratorSet& G = *ctx.gens();
  const std::size_t m = G.base_dim(), k = G.pairs();
  SuperElement r(ctx.gens());
  if (phi.is_zero() || psi.is_zero()) return r;
  std::vector<SuperElement> dp_phi(m), dp_psi(m);
  for (std::size_t i = 0; i < m; ++i) {
    dp_phi[i] = partial_even(phi, G.p(i));
    dp_psi[i] = partial_even(psi, G.p(i));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!dp_psi[i].is_zero()) r += ctx.nabla(i, phi) * dp_psi[i];
    if (!dp_phi[i].is_zero()) r -= dp_phi[i] * ctx.nabla(i, psi);
  }
  if (!ctx.connection()->is_flat()) {
    for (std::size_t i = 0; i < m; ++i) {
      if (dp_phi[i].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (dp_psi[j].is_zero()) continue;
        const SuperElement& R = ctx.curvature_element(i, j);
        if (!R.is_zero()) r += R * dp_phi[i] * dp_psi[j];
      }
    }
  }
  for (std::size_t g = 0; g < k; ++g) {
    SuperElement a = partial_odd_right(phi, G.upper(g));
    if (!a.is_zero()) {
      SuperElement b = partial_odd(psi, G.lower(g));
      if (!b.is_zero()) r += a * b;
    }
    SuperElement c = partial_odd_right(phi, G.lower(g));
    if (!c.is_zero()) {
      SuperElement d = partial_odd(psi, G.upper(g));
      if (!d.is_zero()) r += c * d;
    }
  }
  return r;
}

SuperElement bracket(const BracketContext& ctx, const SuperElement& a, const SuperElement& b) {
  return ctx.kind() == BracketKind::Schouten ? schouten(ctx, a, b) : rothstein(ctx, a, b);
}

std::vector<SuperElement> darboux_momenta(const BracketContext& ctx) {
  if (ctx.kind() == BracketKind::Schouten || !ctx.connection()) throw Error(Errc::WrongContext, "darboux momenta need a ROTHSTEIN context");
  const GeneratorSet& G = *ctx.gens();
  std::vector<SuperElement> r;
  for (std::size_t i = 0; i < G.base_dim(); ++i) {
    SuperElement ri = SuperElement::even_gen(ctx.gens(), G.p(i));
    for (std::size_t a = 0; a < G.pairs(); ++a)
      for (std::size_t b = 0; b < G.pairs(); ++b) {
        const SuperElement& g = ctx.connection()->gamma(i, a, b);
        if (g.is_zero()) continue;
        ri -= g * SuperElement::odd_gen(ctx.gens(), G.upper(a)) * SuperElement::odd_gen(ctx.gens(), G.lower(b));
      }
    r.push_back(ri);
  }
  return r;
}

SuperElement derived_bracket(const BracketContext& ctx, const SuperElement& theta, const SuperElement& x,
                             const SuperElement& y) {
  return bracket(ctx, bracket(ctx, x, theta), y);
}

SuperElement derived_diff(const BracketContext& ctx, const SuperElement& theta, const SuperElement& x) {
  return bracket(ctx, theta, x);
}

ThetaParts split_theta(const SuperElement& theta) {
  ThetaParts t{SuperElement(theta.gens()), SuperElement(theta.gens()), SuperElement(theta.gens()),
               SuperElement(theta.gens())};
  for (auto& [deg, part] : bidegree_components(theta)) {
    if (deg.first + deg.second != 3) throw Error(Errc::WrongDegree, "Theta must have total degree 3");
    switch (deg.first) {
      case 0: t.phi = part; break;
      case 1: t.mu = part; break;
      case 2: t.gamma = part; break;
      default: t.psi = part; break;
    }
  }
  return t;
}

MasterResiduals master_residuals(const BracketContext& ctx, const SuperElement& theta) {
  ThetaParts t = split_theta(theta);
  auto br = [&](const SuperElement& a, const SuperElement& b) { return rothstein(ctx, a, b); };
  const Rational half(1, 2);
  MasterResiduals r;
  r.total = br(theta, theta);
  r.r13 = half * br(t.mu, t.mu) + br(t.gamma, t.phi);
  r.r31 = half * br(t.gamma, t.gamma) + br(t.mu, t.psi);
  r.r22 = br(t.mu, t.gamma) + br(t.phi, t.psi);
  r.r04 = br(t.mu, t.phi);
  r.r40 = br(t.gamma, t.psi);
  return r;
}

}  // namespace dirdef
