#include "dirdef/lie_deform.hpp"

#include "dirdef/linearize.hpp"

namespace dirdef {

namespace {

LieSeries residual_through(const std::vector<MultiMap>& mu) {
  const std::size_t N = mu.size() - 1;
  LieSeries r(N, MultiMap(3, mu[0].dim()));
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t i = 0; i <= n; ++i) r[n] += nr_bracket(mu[i], mu[n - i]);
  return r;
}

MultiMap half_sum(const std::vector<MultiMap>& mu, std::size_t k) {
  MultiMap R(3, mu[0].dim());
  for (std::size_t i = 1; i < k; ++i) R += nr_bracket(mu[i], mu[k - i]);
  return frac(1, 2) * R;
}

// x -> A x
VecQ lin_apply(const MatrixQ& A, const VecQ& x) { return A * x; }

std::map<Monomial, Rational> coords(const SuperElement& a) {
  return std::map<Monomial, Rational>(a.terms().begin(), a.terms().end());
}

void require_linear_bivector(const SuperElement& p) {
  if (p.is_zero()) return;
  iso_I(p, 2);  // throws NOT_HOMOGENEOUS
}

}  // namespace

LieSeries lie_series(const std::vector<MultiMap>& coeffs, std::size_t order) {
  if (coeffs.empty()) throw Error(Errc::Shape, "a series needs mu_0");
  LieSeries s(order, MultiMap(2, coeffs[0].dim()));
  for (std::size_t i = 0; i < coeffs.size() && i <= order; ++i) s[i] = coeffs[i];
  return s;
}

LieSeries mc_residual_lie(const LieSeries& mu) {
  if (!is_lie(mu[0])) throw Error(Errc::Order0NotLie, "mu_0 violates the Jacobi identity");
  return residual_through(mu.coeffs());
}

ObstructionCertificate extend_one_order(const std::vector<MultiMap>& prefix) {
  if (prefix.empty()) throw Error(Errc::PreconditionMC, "empty prefix");
  const MultiMap& mu0 = prefix[0];
  if (!is_lie(mu0)) throw Error(Errc::Order0NotLie, "mu_0 violates the Jacobi identity");
  LieSeries res = residual_through(prefix);
  for (std::size_t n = 0; n <= res.order(); ++n)
    if (!res[n].is_zero()) throw Error(Errc::PreconditionMC, "prefix fails the Maurer-Cartan equation at order " + std::to_string(n));
  ObstructionCertificate c;
  c.order = prefix.size();
  c.R = half_sum(prefix, c.order);
  c.delta_R = ce_differential(mu0, c.R);
  if (!c.delta_R.is_zero()) throw Error(Errc::PreconditionMC, "obstruction cocycle is not closed");
  MatrixQ d2 = ce_matrix(mu0, 2);
  c.cocycle_dim = d2.cols() - rank(d2);
  SolveResult s = solve(ce_matrix(mu0, 2), c.R.flat());
  if (s.consistent) c.solution = MultiMap::from_flat(2, mu0.dim(), s.x);
  else c.witness = s.certificate;
  return c;
}

bool verify_witness(const MultiMap& mu0, const ObstructionCertificate& c) {
  if (!c.witness) return false;
  MatrixQ M = ce_matrix(mu0, 2);
  const VecQ& y = *c.witness;
  if (!is_zero(M.transpose() * y)) return false;
  return sgn(dot(y, c.R.flat())) != 0;
}

LieSeries apply_equivalence(const LinearMapSeries& phi, const LieSeries& mu) {
  const std::size_t d = mu[0].dim();
  const MatrixQ id = MatrixQ::identity(d);
  LinearMapSeries inv = series_inverse(phi, id, [](const MatrixQ& a, const MatrixQ& b) { return a * b; });
  const std::size_t N = std::min(phi.order(), mu.order());
  LieSeries out(N, MultiMap(2, d));
  const auto& pairs = sorted_tuples(2, d);
  for (std::size_t n = 0; n <= N; ++n) {
    // inner(n') = sum_{b+c+e=n'} mu_b(phi_c x, phi_e y), evaluated on basis pairs
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      VecQ acc(d);
      for (std::size_t a = 0; a <= n; ++a) {
        VecQ inner(d);
        for (std::size_t b = 0; b + a <= n; ++b)
          for (std::size_t c = 0; c + b + a <= n; ++c) {
            std::size_t e = n - a - b - c;
            VecQ v = mu[b].eval({phi[c].col(std::size_t(pairs[t][0])), phi[e].col(std::size_t(pairs[t][1]))});
            for (std::size_t g = 0; g < d; ++g) inner[g] += v[g];
          }
        VecQ w = lin_apply(inv[a], inner);
        for (std::size_t g = 0; g < d; ++g) acc[g] += w[g];
      }
      for (std::size_t g = 0; g < d; ++g) out[n].at(t, g) = acc[g];
    }
  }
  return out;
}

Normalization normalize(const LieSeries& mu) {
  const std::size_t d = mu[0].dim(), N = mu.order();
  const MatrixQ id = MatrixQ::identity(d);
  Normalization r{mu, LinearMapSeries(N, MatrixQ(d, d)), N + 1};
  r.phi[0] = id;
  MatrixQ d1 = ce_matrix(mu[0], 1);
  for (std::size_t n = 1; n <= N; ++n) {
    if (r.mu[n].is_zero()) continue;
    SolveResult s = solve(d1, r.mu[n].flat());
    if (!s.consistent) {
      r.first_nontrivial = n;
      return r;
    }
    // mu_n = delta f; phi_t = id - t^n f removes order n
    LinearMapSeries step(N, MatrixQ(d, d));
    step[0] = id;
    MultiMap f = MultiMap::from_flat(1, d, s.x);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t g = 0; g < d; ++g) step[n](g, a) = -f.at(a, g);
    r.mu = apply_equivalence(step, r.mu);
    r.phi = cauchy(r.phi, step, [](const MatrixQ& a, const MatrixQ& b) { return a * b; }, MatrixQ(d, d));
  }
  return r;
}

RigidityVerdict rigidity_check(const MultiMap& mu0) {
  Cohomology h = cohomology(mu0, 2);
  return {h.dim == 0, h.dim};
}

LieDeformReport deform_lie(const MultiMap& mu0, const MultiMap& mu1, std::size_t N) {
  if (!is_lie(mu0)) throw Error(Errc::Order0NotLie, "mu_0 violates the Jacobi identity");
  if (!ce_differential(mu0, mu1).is_zero()) throw Error(Errc::PreconditionMC, "mu_1 is not a 2-cocycle");
  LieDeformReport rep;
  rep.mu = LieSeries(N, MultiMap(2, mu0.dim()));
  rep.mu[0] = mu0;
  if (N >= 1) rep.mu[1] = mu1;
  rep.mu1_exact = solve(ce_matrix(mu0, 1), mu1.flat()).consistent;
  std::vector<MultiMap> prefix{mu0, mu1};
  for (std::size_t k = 2; k <= N; ++k) {
    ObstructionCertificate c = extend_one_order(prefix);
    rep.orders.push_back(c);
    if (!c.extends()) {
      rep.obstructed = true;
      return rep;
    }
    prefix.push_back(*c.solution);
    rep.mu[k] = *c.solution;
    rep.reached = k;
  }
  return rep;
}

SuperElement lie_poisson_tensor(const MultiMap& mu) {
  if (mu.arity() != 2) throw Error(Errc::Shape, "structure constants are 2-ary");
  return iso_I_inv(MultiDerivation::from_multimap(mu), GeneratorSet::schouten(0, mu.dim()));
}

PoissonSeries poisson_residual(const BracketContext& ctx, const PoissonSeries& pi) {
  PoissonSeries r(pi.order(), SuperElement(ctx.gens()));
  for (std::size_t n = 0; n <= pi.order(); ++n)
    for (std::size_t i = 0; i <= n; ++i) r[n] += schouten(ctx, pi[i], pi[n - i]);
  return r;
}

PoissonCertificate linear_poisson_extend(const BracketContext& ctx, const std::vector<SuperElement>& prefix,
                                         int degree_cap) {
  if (prefix.empty()) throw Error(Errc::PreconditionMC, "empty prefix");
  if (ctx.kind() != BracketKind::Schouten) throw Error(Errc::WrongContext, "linear Poisson tensors need the Schouten bracket");
  for (const auto& p : prefix) require_linear_bivector(p);
  const GenPtr& S = ctx.gens();
  PoissonSeries pre{prefix, SuperElement(S)};
  PoissonSeries res = poisson_residual(ctx, pre);
  for (std::size_t n = 0; n <= res.order(); ++n)
    if (!res[n].is_zero()) throw Error(Errc::PreconditionMC, "prefix fails [pi_t, pi_t] = 0 at order " + std::to_string(n));
  PoissonCertificate c;
  c.order = prefix.size();
  c.R = SuperElement(S);
  for (std::size_t i = 1; i < c.order; ++i) c.R += schouten(ctx, prefix[i], prefix[c.order - i]);
  c.R = frac(-1, 2) * c.R;
  c.d_R = schouten(ctx, prefix[0], c.R);
  if (!c.d_R.is_zero()) throw Error(Errc::PreconditionMC, "obstruction is not d_pi-closed");

  auto [m, k] = schouten_dims(*S);
  std::vector<SuperElement> basis;
  MultiDerivation proto(1, m, k);
  auto mons = monomials_upto(proto.ring(), m ? degree_cap : 0);
  for (std::size_t t = 0; t < proto.n_d_tuples(); ++t)
    for (std::size_t g = 0; g < k; ++g)
      for (const auto& x : mons) {
        MultiDerivation D(1, m, k);
        D.d(t, g) = x;
        basis.push_back(iso_I_inv(D, S));
      }
  for (std::size_t t = 0; t < proto.n_sigma_tuples(); ++t)
    for (std::size_t i = 0; i < m; ++i)
      for (const auto& x : mons) {
        MultiDerivation D(1, m, k);
        D.sigma(t, i) = x;
        basis.push_back(iso_I_inv(D, S));
      }
  c.search_dim = basis.size();
  ColumnAssembler<Monomial> A;
  for (const auto& b : basis) A.add_column(coords(schouten(ctx, prefix[0], b)));
  auto rhs = coords(c.R);
  for (const auto& kv : rhs) A.row_of(kv.first);
  SolveResult s = solve(A.matrix(), A.vector(rhs));
  if (s.consistent) {
    SuperElement sol(S);
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (sgn(s.x[j]) != 0) sol += s.x[j] * basis[j];
    c.solution = sol;
  } else {
    c.witness = s.certificate;
  }
  return c;
}

PoissonDeformReport linear_poisson_deform(const BracketContext& ctx, const SuperElement& pi0, const SuperElement& pi1,
                                          std::size_t N, int degree_cap) {
  require_linear_bivector(pi0);
  require_linear_bivector(pi1);
  PoissonDeformReport rep;
  rep.pi = PoissonSeries(N, SuperElement(ctx.gens()));
  rep.pi[0] = pi0;
  if (N >= 1) rep.pi[1] = pi1;
  std::vector<SuperElement> prefix{pi0, pi1};
  for (std::size_t n = 2; n <= N; ++n) {
    PoissonCertificate c = linear_poisson_extend(ctx, prefix, degree_cap);
    rep.orders.push_back(c);
    if (!c.extends()) {
      rep.obstructed = true;
      return rep;
    }
    prefix.push_back(*c.solution);
    rep.pi[n] = *c.solution;
    rep.reached = n;
  }
  return rep;
}

PoissonSeries poisson_equivalence(const BracketContext& ctx, const PoissonSeries& X, const PoissonSeries& pi) {
  if (!X[0].is_zero()) throw Error(Errc::Shape, "X_t must start at order one");
  const std::size_t N = std::min(X.order(), pi.order());
  const SuperElement zero(ctx.gens());
  PoissonSeries out(N, zero), term(N, zero);
  for (std::size_t n = 0; n <= N; ++n) term[n] = pi[n];
  out = term;
  Rational fact = 1;
  for (std::size_t j = 1; j <= N; ++j) {
    PoissonSeries next(N, zero);
    for (std::size_t n = 0; n <= N; ++n)
      for (std::size_t a = 1; a <= n; ++a) next[n] += schouten(ctx, X[a], term[n - a]);
    term = next;
    fact *= Rational(-long(j));
    out += Rational(1) / fact * term;
  }
  return out;
}

}  // namespace dirdef
