#include "dirdef/dirac_numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "dirdef/error.hpp"

namespace dirdef {

namespace {

using EMat = Eigen::MatrixXd;

EMat to_eigen(const MatD& m) {
  EMat e(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  return e;
}

MatD from_eigen(const EMat& e) {
  MatD m(e.rows(), e.cols());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = e(i, j);
  return m;
}

void require_square(const MatD& m, const char* what) {
  if (m.rows != m.cols) throw Error(Errc::ShapeMismatch, std::string(what) + ": matrix is not square");
}

}  // namespace

MatD MatD::identity(std::size_t n) {
  MatD m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

MatD operator*(const MatD& x, const MatD& y) {
  if (x.cols != y.rows) throw Error(Errc::ShapeMismatch, "matrix product shapes");
  MatD out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const double v = x(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += v * y(k, j);
    }
  return out;
}

MatD operator+(const MatD& x, const MatD& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw Error(Errc::ShapeMismatch, "matrix sum shapes");
  MatD out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
  return out;
}

MatD operator-(const MatD& x, const MatD& y) { return x + (-1.0) * y; }

MatD operator*(double s, MatD x) {
  for (double& v : x.a) v *= s;
  return x;
}

MatD transpose(const MatD& x) {
  MatD out(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
  return out;
}

MatD inverse(const MatD& x) {
  require_square(x, "inverse");
  Eigen::FullPivLU<EMat> lu(to_eigen(x));
  if (!lu.isInvertible()) throw Error(Errc::IllConditioned, "matrix is singular");
  return from_eigen(lu.inverse());
}

double frobenius(const MatD& x) {
  double s = 0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

CompatibleStructure numeric_compatible_structure(const MatD& pairing, const MatD& k, double tol) {
  require_square(pairing, "compatible structure");
  require_square(k, "compatible structure");
  if (pairing.rows != k.rows || pairing.rows % 2 != 0)
    throw Error(Errc::ShapeMismatch, "compatible structure: sizes must agree and be even");
  const std::size_t N = pairing.rows;
  EMat G = to_eigen(pairing), K = to_eigen(k);
  if ((G - G.transpose()).norm() > tol * std::max(1.0, G.norm()))
    throw Error(Errc::IllConditioned, "pairing is not symmetric");
  Eigen::LLT<EMat> llt(0.5 * (K + K.transpose()));
  if (llt.info() != Eigen::Success) throw Error(Errc::IllConditioned, "metric seed is not positive definite");
  EMat L = llt.matrixL();
  // A = K^{-1} G is k-self-adjoint; in k-orthonormal coordinates it is L^{-1} G L^{-T}
  EMat Linv = L.inverse();
  EMat At = Linv * G * Linv.transpose();
  At = 0.5 * (At + At.transpose());
  Eigen::SelfAdjointEigenSolver<EMat> es(At);
  const auto& lam = es.eigenvalues();
  double lo = lam.cwiseAbs().minCoeff(), hi = lam.cwiseAbs().maxCoeff();
  if (lo <= tol * hi) throw Error(Errc::IllConditioned, "pairing is (numerically) degenerate");
  std::size_t pos = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > 0) ++pos;
  if (2 * pos != N) throw Error(Errc::IllConditioned, "pairing signature is not (n, n)");
  // polar factor: |A|^{-1} A = sign(A)
  Eigen::VectorXd s = lam.unaryExpr([](double x) { return x > 0 ? 1.0 : -1.0; });
  EMat Jt = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
  EMat J = Linv.transpose() * Jt * L.transpose();
  EMat g = G * J;

  CompatibleStructure out;
  out.J = from_eigen(J);
  out.g = from_eigen(g);
  const double scale = std::max(1.0, G.norm());
  out.involution_residual = (J * J - EMat::Identity(N, N)).norm();
  out.isometry_residual = (J.transpose() * G * J - G).norm() / scale;
  out.symmetry_residual = (g - g.transpose()).norm() / scale;
  Eigen::SelfAdjointEigenSolver<EMat> eg(0.5 * (g + g.transpose()));
  out.min_eigen_g = eg.eigenvalues().minCoeff();
  if (out.involution_residual > 1e3 * tol || out.isometry_residual > 1e3 * tol || out.min_eigen_g <= 0)
    throw Error(Errc::IllConditioned, "compatible structure residuals exceed tolerance");
  return out;
}

namespace {

MatD commutator(const MatD& a, const MatD& b) { return a * b - b * a; }

// max over the step of h |[P', P]| must stay small for RK4 to be trustworthy
void check_step(const MatD& Pd, const MatD& P, double h) {
  if (h * frobenius(commutator(Pd, P)) > 0.5)
    throw Error(Errc::StepTooLarge, "transport step too large for the projector speed");
}

double conj_residual(const MatD& P, const MatD& U, const MatD& P0) { return frobenius(P * U - U * P0); }

}  // namespace

TransportResult numeric_transport(const std::function<MatD(double)>& P, const std::function<MatD(double)>& Pdot,
                                  double T, double h) {
  if (!(h > 0) || !(T >= 0)) throw Error(Errc::StepTooLarge, "transport needs h > 0 and T >= 0");
  const MatD P0 = P(0.0);
  require_square(P0, "transport");
  const std::size_t steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
  TransportResult out;
  MatD U = MatD::identity(P0.rows);
  out.t.push_back(0.0);
  out.U.push_back(U);
  auto field = [&](double t, const MatD& u) {
    MatD p = P(t), pd = Pdot(t);
    check_step(pd, p, h);
    return commutator(pd, p) * u;
  };
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = s * h;
    const double hh = std::min(h, T - t);
    MatD k1 = field(t, U);
    MatD k2 = field(t + hh / 2, U + (hh / 2) * k1);
    MatD k3 = field(t + hh / 2, U + (hh / 2) * k2);
    MatD k4 = field(t + hh, U + hh * k3);
    U = U + (hh / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.t.push_back(t + hh);
    out.U.push_back(U);
    out.conjugation_residual = std::max(out.conjugation_residual, conj_residual(P(t + hh), U, P0));
  }
  return out;
}

TransportResult numeric_transport(const std::vector<MatD>& samples, double dt) {
  if (samples.size() < 5 || samples.size() % 2 == 0)
    throw Error(Errc::ShapeMismatch, "transport needs an odd number (>= 5) of samples");
  if (!(dt > 0)) throw Error(Errc::StepTooLarge, "sample spacing must be positive");
  const std::size_t S = samples.size();
  const MatD& P0 = samples[0];
  require_square(P0, "transport");
  for (const MatD& p : samples) {
    if (p.rows != P0.rows || p.cols != P0.cols) throw Error(Errc::ShapeMismatch, "transport samples differ in size");
    if (frobenius(p * p - p) > 1e-6 * std::max(1.0, frobenius(p)))
      throw Error(Errc::IllConditioned, "sample is not a projector");
  }
  // fourth order differences, one-sided stencils at the ends
  std::vector<MatD> D(S);
  for (std::size_t j = 0; j < S; ++j) {
    const auto& p = samples;
    if (j >= 2 && j + 2 < S) {
      D[j] = (1.0 / (12 * dt)) * (p[j - 2] - 8.0 * p[j - 1] + 8.0 * p[j + 1] - p[j + 2]);
    } else if (j < 2) {
      D[j] = (1.0 / (12 * dt)) * (-25.0 * p[j] + 48.0 * p[j + 1] - 36.0 * p[j + 2] + 16.0 * p[j + 3] - 3.0 * p[j + 4]);
    } else {
      D[j] = (-1.0 / (12 * dt)) * (-25.0 * p[j] + 48.0 * p[j - 1] - 36.0 * p[j - 2] + 16.0 * p[j - 3] - 3.0 * p[j - 4]);
    }
  }
  const double h = 2 * dt;
  TransportResult out;
  MatD U = MatD::identity(P0.rows);
  out.t.push_back(0.0);
  out.U.push_back(U);
  auto field = [&](std::size_t j, const MatD& u) {
    check_step(D[j], samples[j], h);
    return commutator(D[j], samples[j]) * u;
  };
  for (std::size_t j = 0; j + 2 < S; j += 2) {
    MatD k1 = field(j, U);
    MatD k2 = field(j + 1, U + dt * k1);
    MatD k3 = field(j + 1, U + dt * k2);
    MatD k4 = field(j + 2, U + h * k3);
    U = U + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.t.push_back((j + 2) * dt);
    out.U.push_back(U);
    out.conjugation_residual = std::max(out.conjugation_residual, conj_residual(samples[j + 2], U, P0));
  }
  return out;
}

MatD column_projector(const MatD& B) {
  EMat b = to_eigen(B);
  Eigen::ColPivHouseholderQR<EMat> qr(b);
  const Eigen::Index r = qr.rank();
  EMat Q = EMat(qr.householderQ()).leftCols(r);
  return from_eigen(Q * Q.transpose());
}

double subspace_distance(const MatD& A, const MatD& B) {
  MatD PA = column_projector(A), PB = column_projector(B);
  EMat d = to_eigen(PA - PB);
  if (d.size() == 0) return 0.0;
  Eigen::JacobiSVD<EMat> svd(d);
  return svd.singularValues()(0);
}

ProjectorPath graph_projector_path(const MatD& omega) {
  require_square(omega, "graph path");
  const std::size_t n = omega.rows;
  const MatD wt = transpose(omega);
  auto basis = [n, wt](double t) {
    MatD B(2 * n, n);
    for (std::size_t i = 0; i < n; ++i) {
      B(i, i) = 1.0;
      for (std::size_t j = 0; j < n; ++j) B(n + i, j) = t * wt(i, j);
    }
    return B;
  };
  MatD Bd(2 * n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) Bd(n + i, j) = wt(i, j);
  ProjectorPath path;
  path.P = [basis](double t) {
    MatD B = basis(t);
    return B * inverse(transpose(B) * B) * transpose(B);
  };
  path.Pdot = [basis, Bd](double t) {
    MatD B = basis(t), Bt = transpose(B), Bdt = transpose(Bd);
    MatD M = inverse(Bt * B);
    MatD Md = (-1.0) * M * (Bdt * B + Bt * Bd) * M;
    return Bd * M * Bt + B * Md * Bt + B * M * Bdt;
  };
  return path;
}

}  // namespace dirdef
