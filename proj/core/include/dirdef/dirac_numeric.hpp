#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dirdef {

// Dense row-major double matrix for the numeric side.
struct MatD {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  MatD() = default;
  MatD(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  static MatD identity(std::size_t n);
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

MatD operator*(const MatD& x, const MatD& y);
MatD operator+(const MatD& x, const MatD& y);
MatD operator-(const MatD& x, const MatD& y);
MatD operator*(double s, MatD x);
MatD transpose(const MatD& x);
MatD inverse(const MatD& x);
double frobenius(const MatD& x);

struct CompatibleStructure {
  MatD J;  // J^2 = id, pairing isometry
  MatD g;  // g(e1, e2) = (e1, J e2), positive definite
  double involution_residual = 0, isometry_residual = 0, symmetry_residual = 0, min_eigen_g = 0;
};

// k: positive definite auxiliary metric
CompatibleStructure numeric_compatible_structure(const MatD& pairing, const MatD& k, double tol = 1e-9);

struct TransportResult {
  std::vector<double> t;
  std::vector<MatD> U;
  double conjugation_residual = 0;  // max_t |P(t) U - U P(0)|_F
};

// RK4 on U' = [P', P] U, U(0) = id, step h on [0, T]
TransportResult numeric_transport(const std::function<MatD(double)>& P, const std::function<MatD(double)>& Pdot,
                                  double T, double h);
// samples P(j dt), j = 0..2M; RK4 step 2 dt, derivative by five-point differences
TransportResult numeric_transport(const std::vector<MatD>& samples, double dt);

// orthogonal projector onto the column span of B
MatD column_projector(const MatD& B);
// sine of the largest principal angle between column spans
double subspace_distance(const MatD& A, const MatD& B);

// Euclidean projector path onto graph(t omega) in V + V*
struct ProjectorPath {
  std::function<MatD(double)> P, Pdot;
};
ProjectorPath graph_projector_path(const MatD& omega);

}  // namespace dirdef
