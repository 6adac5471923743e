#include "dirdef/ihs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

namespace dirdef {

namespace {

double to_double(const Rational& q) { return q.get_d(); }

void require_ring(const SuperElement& f, std::size_t n, const char* what) {
  const GeneratorSet& G = *f.gens();
  if (G.n_odd() != 0 || G.n_even() != n)
    throw Error(Errc::Shape, std::string(what) + ": expected a polynomial in " + std::to_string(n) + " variables");
}

Eigen::MatrixXd eig(const MatD& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  return e;
}

}  // namespace

IHSystem::IHSystem(LinearDirac L, SuperElement H, double h, double tol)
    : L_(std::move(L)), H_(std::move(H)), h_(h), tol_(tol) {
  if (!H_.gens()) throw Error(Errc::Shape, "Hamiltonian without generator set");
  require_ring(H_, n(), "Hamiltonian");
  if (!(h > 0) || !(tol > 0)) throw Error(Errc::Shape, "step and tolerance must be positive");
  for (std::size_t i = 0; i < n(); ++i) dH_.push_back(partial_even(H_, i));
  const auto& basis = L_.subspace().basis();
  a_ = MatD(basis.size(), n());
  alpha_ = MatD(basis.size(), n());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < n(); ++i) {
      a_(j, i) = to_double(basis[j][i]);
      alpha_(j, i) = to_double(basis[j][n() + i]);
    }
  SubspaceQ K = in_V(L_);
  gauge_ = MatD(n(), K.dim());
  for (std::size_t c = 0; c < K.dim(); ++c)
    for (std::size_t i = 0; i < n(); ++i) gauge_(i, c) = to_double(K.basis()[c][i]);
}

double IHSystem::energy(const VecD& x) const { return evaluate(H_, x); }

VecD IHSystem::gradient(const VecD& x) const {
  VecD g(n());
  for (std::size_t i = 0; i < n(); ++i) g[i] = evaluate(dH_[i], x);
  return g;
}

VecD IHSystem::constraint_residuals(const VecD& x) const {
  VecD g = gradient(x), out(gauge_.cols, 0.0);
  for (std::size_t c = 0; c < gauge_.cols; ++c)
    for (std::size_t i = 0; i < n(); ++i) out[c] += gauge_(i, c) * g[i];
  return out;
}

VelocityResult IHSystem::velocity_solve(const VecD& x) const {
  if (x.size() != n()) throw Error(Errc::Shape, "state has the wrong dimension");
  const VecD g = gradient(x);
  // <(xdot, dH), (a_j, alpha_j)> = alpha_j(xdot) + dH(a_j) = 0
  Eigen::MatrixXd A = eig(alpha_);
  Eigen::VectorXd b(alpha_.rows);
  for (std::size_t j = 0; j < alpha_.rows; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < n(); ++i) s += a_(j, i) * g[i];
    b(j) = -s;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  Eigen::VectorXd xd = cod.solve(b);
  VelocityResult r;
  r.xdot.assign(xd.data(), xd.data() + xd.size());
  r.gap = (A * xd - b).norm();
  r.admissible = r.gap <= tol_ * std::max(1.0, b.norm());
  r.gauge = gauge_;
  for (std::size_t i = 0; i < n(); ++i) r.dH_along_xdot += g[i] * r.xdot[i];
  return r;
}

Trajectory integrate(const IHSystem& s, const VecD& x0, std::size_t steps) {
  const std::size_t n = s.n();
  if (x0.size() != n) throw Error(Errc::Shape, "initial state has the wrong dimension");
  const double h = s.step();
  Trajectory tr;
  auto sample = [&](double t, const VecD& x) {
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.H.push_back(s.energy(x));
    double c = 0;
    for (double v : s.constraint_residuals(x)) c = std::max(c, std::abs(v));
    tr.constraint.push_back(c);
    tr.max_drift = std::max(tr.max_drift, std::abs(tr.H.back() - tr.H.front()));
  };
  auto field = [&](const VecD& x, double t) {
    VelocityResult v = s.velocity_solve(x);
    if (!v.admissible)
      throw Error(Errc::LeftAdmissibleSet, "dH left rho*(L) near t = " + std::to_string(t));
    tr.max_gap = std::max(tr.max_gap, v.gap);
    return v.xdot;
  };
  auto axpy = [n](const VecD& x, double a, const VecD& y) {
    VecD out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * y[i];
    return out;
  };
  VecD x = x0;
  sample(0.0, x);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = k * h;
    VecD k1 = field(x, t);
    VecD k2 = field(axpy(x, h / 2, k1), t + h / 2);
    VecD k3 = field(axpy(x, h / 2, k2), t + h / 2);
    VecD k4 = field(axpy(x, h, k3), t + h);
    for (std::size_t i = 0; i < n; ++i) x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    sample(t + h, x);
  }
  return tr;
}

namespace {

// coefficient vectors of df, keyed by monomial
std::map<Monomial, VecQ> gradient_coefficients(const SuperElement& f, std::size_t n) {
  std::map<Monomial, VecQ> out;
  for (std::size_t i = 0; i < n; ++i) {
    const SuperElement d = partial_even(f, i);
    for (const auto& [mono, c] : d.terms()) {
      auto it = out.try_emplace(mono, VecQ(n)).first;
      it->second[i] = c;
    }
  }
  return out;
}

MatrixQ alpha_columns(const LinearDirac& L) {
  const std::size_t n = L.n();
  const auto& basis = L.subspace().basis();
  MatrixQ M(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) M(i, j) = basis[j][n + i];
  return M;
}

}  // namespace

bool is_admissible(const LinearDirac& L, const SuperElement& f) {
  require_ring(f, L.n(), "admissible function");
  SubspaceQ R = rho_star(L);
  for (const auto& [mono, v] : gradient_coefficients(f, L.n()))
    if (!R.contains(v)) return false;
  return true;
}

std::vector<SuperElement> hamiltonian_vector_field(const LinearDirac& L, const SuperElement& f) {
  require_ring(f, L.n(), "admissible function");
  const std::size_t n = L.n();
  const auto& basis = L.subspace().basis();
  const MatrixQ M = alpha_columns(L);
  std::vector<SuperElement> X(n, SuperElement(f.gens()));
  for (const auto& [mono, v] : gradient_coefficients(f, n)) {
    SolveResult s = solve(M, v);
    if (!s.consistent) throw Error(Errc::NotAdmissible, "df is not in rho*(L): " + f.str());
    for (std::size_t i = 0; i < n; ++i) {
      Rational a = 0;
      for (std::size_t j = 0; j < basis.size(); ++j) a += s.x[j] * basis[j][i];
      if (a != 0) X[i].add_term(mono, a);
    }
  }
  return X;
}

SuperElement admissible_bracket(const LinearDirac& L, const SuperElement& f, const SuperElement& g) {
  if (!is_admissible(L, f)) throw Error(Errc::NotAdmissible, "first argument is not admissible");
  auto Xg = hamiltonian_vector_field(L, g);
  SuperElement out(f.gens());
  for (std::size_t i = 0; i < L.n(); ++i)
    if (!Xg[i].is_zero()) out += Xg[i] * partial_even(f, i);
  return out;
}

}  // namespace dirdef
