#include "dirdef/dirac_linear.hpp"

#include <algorithm>

namespace dirdef {

namespace {

void require_antisymmetric(const MatrixQ& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(Errc::ShapeMismatch, std::string(what) + ": matrix is not square");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (m(i, j) != -m(j, i)) throw Error(Errc::NotAntisymmetric, std::string(what) + ": matrix is not antisymmetric");
}

VecQ concat(const VecQ& a, const VecQ& b) {
  VecQ out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

VecQ slice(const VecQ& v, std::size_t from, std::size_t len) {
  return VecQ(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + len));
}

// rows g*l for a basis of L; for a maximal isotropic L its kernel is L itself
MatrixQ isotropic_equations(const SubspaceQ& L, const BilinearFormQ& form) {
  std::vector<VecQ> rows;
  for (const VecQ& l : L.basis()) rows.push_back(form.g * l);
  return MatrixQ::from_rows(rows, form.dim());
}

MatrixQ block_diag(const MatrixQ& a, const MatrixQ& b) {
  MatrixQ out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

// solve eta with eta . r_b = omega(a, b) for all basis vectors r_b of S
VecQ extend_functional(const SubspaceQ& S, const VecQ& values) {
  MatrixQ M = MatrixQ::from_rows(S.basis(), S.ambient_dim());
  SolveResult s = solve(M, values);
  if (!s.consistent) throw Error(Errc::ShapeMismatch, "functional values do not fit the subspace");
  return s.x;
}

}  // namespace

BilinearFormQ PairedSpace::pairing() const {
  MatrixQ g(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, n + i) = 1;
    g(n + i, i) = 1;
  }
  return BilinearFormQ(g, BilinearFormQ::Kind::Symmetric);
}

Rational PairedSpace::pair(const VecQ& a, const VecQ& b) const {
  Rational s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[n + i] * b[i] + b[n + i] * a[i];
  return s;
}

Rational PairedSpace::pair_minus(const VecQ& a, const VecQ& b) const {
  Rational s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[n + i] * b[i] - b[n + i] * a[i];
  return s;
}

bool is_isotropic(const SubspaceQ& L, const BilinearFormQ& form) {
  const auto& B = L.basis();
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = i; j < B.size(); ++j)
      if (sgn(form(B[i], B[j])) != 0) return false;
  return true;
}

LinearDirac::LinearDirac(std::size_t n, SubspaceQ L) : n_(n), L_(std::move(L)) {
  if (L_.ambient_dim() != 2 * n_) throw Error(Errc::ShapeMismatch, "Dirac structure: ambient dimension is not 2n");
  if (L_.dim() != n_) throw Error(Errc::NotIsotropic, "Dirac structure: dimension is not n");
  if (!is_isotropic(L_, PairedSpace(n_).pairing())) throw Error(Errc::NotIsotropic, "Dirac structure: not isotropic");
}

LinearDirac LinearDirac::tangent(std::size_t n) { return from_two_form(MatrixQ(n, n)); }
LinearDirac LinearDirac::cotangent(std::size_t n) { return from_bivector(MatrixQ(n, n)); }

LinearDirac from_two_form(const MatrixQ& omega) {
  require_antisymmetric(omega, "from_two_form");
  const std::size_t n = omega.rows();
  std::vector<VecQ> B;
  MatrixQ wt = omega.transpose();
  for (std::size_t i = 0; i < n; ++i) {
    VecQ x(n);
    x[i] = 1;
    B.push_back(concat(x, wt * x));
  }
  return LinearDirac(n, SubspaceQ::span(2 * n, B));
}

LinearDirac from_bivector(const MatrixQ& pi) {
  require_antisymmetric(pi, "from_bivector");
  const std::size_t n = pi.rows();
  std::vector<VecQ> B;
  MatrixQ pt = pi.transpose();
  for (std::size_t i = 0; i < n; ++i) {
    VecQ eta(n);
    eta[i] = 1;
    B.push_back(concat(pt * eta, eta));
  }
  return LinearDirac(n, SubspaceQ::span(2 * n, B));
}

SubspaceQ rho(const LinearDirac& L) {
  std::vector<VecQ> out;
  for (const VecQ& v : L.subspace().basis()) out.push_back(slice(v, 0, L.n()));
  return SubspaceQ::span(L.n(), out);
}

SubspaceQ rho_star(const LinearDirac& L) {
  std::vector<VecQ> out;
  for (const VecQ& v : L.subspace().basis()) out.push_back(slice(v, L.n(), L.n()));
  return SubspaceQ::span(L.n(), out);
}

SubspaceQ in_V(const LinearDirac& L) {
  const std::size_t n = L.n();
  // kill the eta block
  MatrixQ M(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) M(i, n + i) = 1;
  SubspaceQ cap = L.subspace().intersect(kernel_basis(M));
  std::vector<VecQ> out;
  for (const VecQ& v : cap.basis()) out.push_back(slice(v, 0, n));
  return SubspaceQ::span(n, out);
}

SubspaceQ in_V_star(const LinearDirac& L) {
  const std::size_t n = L.n();
  MatrixQ M(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) M(i, i) = 1;
  SubspaceQ cap = L.subspace().intersect(kernel_basis(M));
  std::vector<VecQ> out;
  for (const VecQ& v : cap.basis()) out.push_back(slice(v, n, n));
  return SubspaceQ::span(n, out);
}

SubspaceQ dual_annihilator(const SubspaceQ& S) {
  if (S.dim() == 0) return SubspaceQ::full(S.ambient_dim());
  return kernel_basis(MatrixQ::from_rows(S.basis(), S.ambient_dim()));
}

Representation represent(const LinearDirac& L) {
  const std::size_t n = L.n();
  const SubspaceQ& S = L.subspace();
  Representation rep;

  // Omega(x, y) = eta(y) for (x, eta) in L
  rep.range.R = rho(L);
  {
    const auto& RB = rep.range.R.basis();
    const std::size_t r = RB.size();
    // lift each r_a to some (r_a, eta_a) in L by solving in the basis of L
    std::vector<VecQ> xs;
    for (const VecQ& v : S.basis()) xs.push_back(slice(v, 0, n));
    MatrixQ X = MatrixQ::from_cols(xs, n);
    rep.range.omega = MatrixQ(r, r);
    for (std::size_t a = 0; a < r; ++a) {
      SolveResult s = solve(X, RB[a]);
      VecQ eta(n);
      for (std::size_t i = 0; i < S.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) eta[j] += s.x[i] * S.basis()[i][n + j];
      for (std::size_t b = 0; b < r; ++b) rep.range.omega(a, b) = dot(eta, RB[b]);
    }
  }

  // pi(zeta_a, zeta_b) = zeta_b(x_a) for (x_a, zeta_a) in L, zeta in K-annihilator = rho*(L)
  rep.kernel.K = in_V(L);
  {
    SubspaceQ Z = dual_annihilator(rep.kernel.K);
    const auto& ZB = Z.basis();
    const std::size_t z = ZB.size();
    std::vector<VecQ> etas;
    for (const VecQ& v : S.basis()) etas.push_back(slice(v, n, n));
    MatrixQ E = MatrixQ::from_cols(etas, n);
    rep.kernel.pi = MatrixQ(z, z);
    for (std::size_t a = 0; a < z; ++a) {
      SolveResult s = solve(E, ZB[a]);
      VecQ x(n);
      for (std::size_t i = 0; i < S.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) x[j] += s.x[i] * S.basis()[i][j];
      for (std::size_t b = 0; b < z; ++b) rep.kernel.pi(a, b) = dot(ZB[b], x);
    }
  }
  return rep;
}

LinearDirac from_R_Omega(const RangeForm& r) {
  const std::size_t n = r.R.ambient_dim();
  const std::size_t k = r.R.dim();
  if (r.omega.rows() != k || r.omega.cols() != k) throw Error(Errc::ShapeMismatch, "from_R_Omega: form size");
  require_antisymmetric(r.omega, "from_R_Omega");
  std::vector<VecQ> B;
  for (std::size_t a = 0; a < k; ++a) B.push_back(concat(r.R.basis()[a], extend_functional(r.R, r.omega.row(a))));
  SubspaceQ ann = dual_annihilator(r.R);
  for (const VecQ& z : ann.basis()) B.push_back(concat(VecQ(n), z));
  return LinearDirac(n, SubspaceQ::span(2 * n, B));
}

LinearDirac from_K_pi(const KernelBivector& kb) {
  const std::size_t n = kb.K.ambient_dim();
  SubspaceQ Z = dual_annihilator(kb.K);
  const std::size_t z = Z.dim();
  if (kb.pi.rows() != z || kb.pi.cols() != z) throw Error(Errc::ShapeMismatch, "from_K_pi: bivector size");
  require_antisymmetric(kb.pi, "from_K_pi");
  std::vector<VecQ> B;
  for (std::size_t a = 0; a < z; ++a) B.push_back(concat(extend_functional(Z, kb.pi.row(a)), Z.basis()[a]));
  for (const VecQ& x : kb.K.basis()) B.push_back(concat(x, VecQ(n)));
  return LinearDirac(n, SubspaceQ::span(2 * n, B));
}

LinearDirac forward_map(const MatrixQ& phi, const LinearDirac& LV) {
  const std::size_t n = phi.cols(), m = phi.rows();
  if (LV.n() != n) throw Error(Errc::ShapeMismatch, "forward_map: phi does not start at V");
  // unknowns (x, eta) in V x W*, constraint (x, phi^T eta) in L_V
  MatrixQ C = isotropic_equations(LV.subspace(), PairedSpace(n).pairing());
  SubspaceQ sol = kernel_basis(C * block_diag(MatrixQ::identity(n), phi.transpose()));
  std::vector<VecQ> B;
  for (const VecQ& v : sol.basis()) B.push_back(concat(phi * slice(v, 0, n), slice(v, n, m)));
  return LinearDirac(m, SubspaceQ::span(2 * m, B));
}

LinearDirac backward_map(const MatrixQ& phi, const LinearDirac& LW) {
  const std::size_t n = phi.cols(), m = phi.rows();
  if (LW.n() != m) throw Error(Errc::ShapeMismatch, "backward_map: phi does not end at W");
  // unknowns (x, eta) in V x W*, constraint (phi x, eta) in L_W
  MatrixQ C = isotropic_equations(LW.subspace(), PairedSpace(m).pairing());
  SubspaceQ sol = kernel_basis(C * block_diag(phi, MatrixQ::identity(m)));
  std::vector<VecQ> B;
  MatrixQ pt = phi.transpose();
  for (const VecQ& v : sol.basis()) B.push_back(concat(slice(v, 0, n), pt * slice(v, n, m)));
  return LinearDirac(n, SubspaceQ::span(2 * n, B));
}

BilinearFormQ product_pairing(std::size_t n1, std::size_t n2) {
  MatrixQ g1 = PairedSpace(n1).pairing().g;
  MatrixQ g2 = PairedSpace(n2).pairing().g;
  return BilinearFormQ(block_diag(g1, Rational(-1) * g2), BilinearFormQ::Kind::Symmetric);
}

CanonicalRelation::CanonicalRelation(std::size_t n1, std::size_t n2, SubspaceQ L)
    : n1_(n1), n2_(n2), L_(std::move(L)) {
  if (L_.ambient_dim() != 2 * (n1_ + n2_)) throw Error(Errc::ShapeMismatch, "relation: ambient dimension");
  if (L_.dim() != n1_ + n2_ || !is_isotropic(L_, product_pairing(n1_, n2_)))
    throw Error(Errc::NotIsotropic, "relation is not maximal isotropic");
}

CanonicalRelation CanonicalRelation::identity(std::size_t n) {
  std::vector<VecQ> B;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    VecQ v(4 * n);
    v[i] = 1;
    v[2 * n + i] = 1;
    B.push_back(v);
  }
  return CanonicalRelation(n, n, SubspaceQ::span(4 * n, B));
}

CanonicalRelation CanonicalRelation::of(const LinearDirac& L) { return CanonicalRelation(L.n(), 0, L.subspace()); }

CanonicalRelation CanonicalRelation::forward(const MatrixQ& phi) {
  const std::size_t n = phi.cols(), m = phi.rows();
  MatrixQ pt = phi.transpose();
  std::vector<VecQ> B;
  // ((phi x, 0), (x, 0)) and ((0, eta), (0, phi^T eta))
  for (std::size_t i = 0; i < n; ++i) {
    VecQ x(n);
    x[i] = 1;
    B.push_back(concat(concat(phi * x, VecQ(m)), concat(x, VecQ(n))));
  }
  for (std::size_t j = 0; j < m; ++j) {
    VecQ eta(m);
    eta[j] = 1;
    B.push_back(concat(concat(VecQ(m), eta), concat(VecQ(n), pt * eta)));
  }
  return CanonicalRelation(m, n, SubspaceQ::span(2 * (m + n), B));
}

CanonicalRelation CanonicalRelation::backward(const MatrixQ& phi) {
  const std::size_t n = phi.cols(), m = phi.rows();
  CanonicalRelation f = forward(phi);
  std::vector<VecQ> B;
  for (const VecQ& v : f.subspace().basis()) B.push_back(concat(slice(v, 2 * m, 2 * n), slice(v, 0, 2 * m)));
  return CanonicalRelation(n, m, SubspaceQ::span(2 * (m + n), B));
}

LinearDirac CanonicalRelation::as_dirac() const {
  if (n2_ != 0) throw Error(Errc::FactorMismatch, "relation is not a Dirac structure (second factor is not zero)");
  return LinearDirac(n1_, L_);
}

CanonicalRelation compose_relations(const CanonicalRelation& L1, const CanonicalRelation& L2) {
  if (L1.n2() != L2.n1()) throw Error(Errc::FactorMismatch, "compose_relations: middle factors differ");
  const std::size_t a = 2 * L1.n1(), b = 2 * L1.n2(), c = 2 * L2.n2();
  const auto& B1 = L1.subspace().basis();
  const auto& B2 = L2.subspace().basis();
  // sum lambda_i (e2 part of B1_i) - sum mu_j (e2 part of B2_j) = 0
  MatrixQ M(b, B1.size() + B2.size());
  for (std::size_t i = 0; i < B1.size(); ++i)
    for (std::size_t r = 0; r < b; ++r) M(r, i) = B1[i][a + r];
  for (std::size_t j = 0; j < B2.size(); ++j)
    for (std::size_t r = 0; r < b; ++r) M(r, B1.size() + j) = -B2[j][r];
  SubspaceQ ker = kernel_basis(M);
  std::vector<VecQ> out;
  for (const VecQ& k : ker.basis()) {
    VecQ v(a + c);
    for (std::size_t i = 0; i < B1.size(); ++i)
      if (sgn(k[i]) != 0)
        for (std::size_t r = 0; r < a; ++r) v[r] += k[i] * B1[i][r];
    for (std::size_t j = 0; j < B2.size(); ++j)
      if (sgn(k[B1.size() + j]) != 0)
        for (std::size_t r = 0; r < c; ++r) v[a + r] += k[B1.size() + j] * B2[j][b + r];
    out.push_back(v);
  }
  return CanonicalRelation(L1.n1(), L2.n2(), SubspaceQ::span(a + c, out));
}

LinearDirac forward_map_relational(const MatrixQ& phi, const LinearDirac& LV) {
  if (LV.n() != phi.cols()) throw Error(Errc::ShapeMismatch, "forward_map: phi does not start at V");
  return compose_relations(CanonicalRelation::forward(phi), CanonicalRelation::of(LV)).as_dirac();
}

LinearDirac backward_map_relational(const MatrixQ& phi, const LinearDirac& LW) {
  if (LW.n() != phi.rows()) throw Error(Errc::ShapeMismatch, "backward_map: phi does not end at W");
  return compose_relations(CanonicalRelation::backward(phi), CanonicalRelation::of(LW)).as_dirac();
}

HyperbolicCompletion hyperbolic_completion(const BilinearFormQ& form, const SubspaceQ& W) {
  if (form.kind != BilinearFormQ::Kind::Symmetric) throw Error(Errc::ShapeMismatch, "hyperbolic_completion: form is not symmetric");
  const std::size_t N = form.dim();
  if (W.ambient_dim() != N) throw Error(Errc::ShapeMismatch, "hyperbolic_completion: ambient dimension");
  if (rank(form.g) != N) throw Error(Errc::DegeneratePairing, "hyperbolic_completion: form is degenerate");
  if (!is_isotropic(W, form)) throw Error(Errc::NotIsotropic, "hyperbolic_completion: W is not isotropic");

  HyperbolicCompletion out;
  out.w = W.basis();
  const std::size_t k = out.w.size();
  for (std::size_t i = 0; i < k; ++i) {
    // (u, w_j) = delta_ij for all j, (u, v_j) = 0 for j < i
    std::vector<VecQ> rows;
    VecQ rhs;
    for (std::size_t j = 0; j < k; ++j) {
      rows.push_back(form.g * out.w[j]);
      rhs.push_back(j == i ? Rational(1) : Rational(0));
    }
    for (std::size_t j = 0; j < i; ++j) {
      rows.push_back(form.g * out.v[j]);
      rhs.push_back(0);
    }
    SolveResult s = solve(MatrixQ::from_rows(rows, N), rhs);
    if (!s.consistent) throw Error(Errc::DegeneratePairing, "hyperbolic_completion: no dual vector");
    VecQ u = s.x;
    // 2 alpha (w_i, u) + (u, u) = 0 with (w_i, u) = 1
    Rational alpha = -form(u, u) / 2;
    for (std::size_t r = 0; r < N; ++r) u[r] += alpha * out.w[i][r];
    out.v.push_back(u);
  }
  std::vector<VecQ> planes = out.w;
  planes.insert(planes.end(), out.v.begin(), out.v.end());
  out.U = annihilator(SubspaceQ::span(N, planes), form);
  return out;
}

namespace {

// rational square root when q is a square of a rational
bool rational_sqrt(const Rational& q, Rational& r) {
  if (sgn(q) < 0) return false;
  mpz_class a = q.get_num(), b = q.get_den();
  mpz_class sa = sqrt(a), sb = sqrt(b);
  if (sa * sa != a || sb * sb != b) return false;
  r = Rational(sa, sb);
  r.canonicalize();
  return true;
}

}  // namespace

namespace {

mpz_class lcm_den(const std::vector<Rational>& v) {
  mpz_class l = 1;
  for (const Rational& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  return l;
}

bool perfect_square(const mpz_class& a, mpz_class& r) {
  if (a < 0) return false;
  r = sqrt(a);
  return r * r == a;
}

// rational zero of sum d_i c_i^2 on a diagonal form; empty when none was found
VecQ diagonal_zero(const std::vector<Rational>& d) {
  const std::size_t u = d.size();
  // binary: d_i a^2 + d_j = 0
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = 0; j < u; ++j) {
      if (sgn(d[i]) <= 0 || sgn(d[j]) >= 0) continue;
      Rational a;
      if (!rational_sqrt(-d[j] / d[i], a)) continue;
      VecQ c(u);
      c[i] = a;
      c[j] = 1;
      return c;
    }
  // ternary: a x^2 + b y^2 + c z^2 = 0 in integers, search x, y up to a Holzer-type bound
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = i + 1; j < u; ++j)
      for (std::size_t l = 0; l < u; ++l) {
        if (l == i || l == j) continue;
        if (sgn(d[i]) != sgn(d[j]) || sgn(d[l]) != -sgn(d[i]) || sgn(d[i]) == 0) continue;
        mpz_class L = lcm_den({d[i], d[j], d[l]});
        mpz_class a = Rational(d[i] * L).get_num(), b = Rational(d[j] * L).get_num(), c = Rational(d[l] * L).get_num();
        mpz_class bound = sqrt(abs(a * c)) + sqrt(abs(b * c)) + 1;
        const long R = bound > 400 ? 400 : bound.get_si();
        for (long x = 0; x <= R; ++x)
          for (long y = (x == 0 ? 1 : -R); y <= R; ++y) {
            mpz_class num = -(a * x * x + b * y * y);
            if (num % c != 0) continue;
            mpz_class z;
            if (!perfect_square(num / c, z)) continue;
            VecQ v(u);
            v[i] = x;
            v[j] = y;
            v[l] = Rational(z);
            return v;
          }
      }
  return {};
}

}  // namespace

IsotropicExtension extend_isotropic(const BilinearFormQ& form, const SubspaceQ& W) {
  SignatureNF sig = signature_normal_form(form);
  IsotropicExtension out;
  out.bound = std::min(sig.q_plus, sig.p_minus);
  SubspaceQ cur = W;
  while (cur.dim() < out.bound) {
    HyperbolicCompletion hc = hyperbolic_completion(form, cur);
    const auto& UB = hc.U.basis();
    const std::size_t u = UB.size();
    MatrixQ gu(u, u);
    for (std::size_t i = 0; i < u; ++i)
      for (std::size_t j = 0; j < u; ++j) gu(i, j) = form(UB[i], UB[j]);
    SignatureNF s = signature_normal_form(BilinearFormQ(gu, BilinearFormQ::Kind::Symmetric));
    std::vector<Rational> d(u);
    for (std::size_t i = 0; i < u; ++i) d[i] = s.D(i, i);
    VecQ c = diagonal_zero(d);
    if (c.empty()) break;
    VecQ vec(form.dim());
    for (std::size_t r = 0; r < u; ++r) {
      Rational coeff = 0;
      for (std::size_t i = 0; i < u; ++i) coeff += s.T(r, i) * c[i];
      for (std::size_t col = 0; col < vec.size(); ++col) vec[col] += coeff * UB[r][col];
    }
    std::vector<VecQ> B = cur.basis();
    B.push_back(vec);
    cur = SubspaceQ::span(form.dim(), B);
  }
  out.maximal = cur;
  out.complete = cur.dim() == out.bound;
  return out;
}

MatrixQ gauge_matrix(const MatrixQ& B) {
  require_antisymmetric(B, "gauge_transform");
  const std::size_t n = B.rows();
  MatrixQ T = MatrixQ::identity(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) T(n + i, j) = B(j, i);
  return T;
}

LinearDirac gauge_transform(const MatrixQ& B, const LinearDirac& L) {
  MatrixQ T = gauge_matrix(B);
  if (T.rows() != 2 * L.n()) throw Error(Errc::ShapeMismatch, "gauge_transform: size");
  std::vector<VecQ> out;
  for (const VecQ& v : L.subspace().basis()) out.push_back(T * v);
  return LinearDirac(L.n(), SubspaceQ::span(2 * L.n(), out));
}

}  // namespace dirdef
