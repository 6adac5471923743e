#pragma once

#include <optional>
#include <vector>

#include "dirdef/brackets.hpp"
#include "dirdef/multideriv.hpp"
#include "dirdef/multimap.hpp"
#include "dirdef/series.hpp"

namespace dirdef {

using LieSeries = FormalSeries<MultiMap>;
using LinearMapSeries = FormalSeries<MatrixQ>;
using PoissonSeries = FormalSeries<SuperElement>;

LieSeries lie_series(const std::vector<MultiMap>& coeffs, std::size_t order);

// per-order coefficients of [mu_t, mu_t]_NR; ORDER0_NOT_LIE when mu_0 fails Jacobi
LieSeries mc_residual_lie(const LieSeries& mu);

struct ObstructionCertificate {
  std::size_t order = 0;
  MultiMap R;        // 1/2 sum_{i=1}^{k-1} [mu_i, mu_{k-i}]_NR
  MultiMap delta_R;  // delta_CE R, zero by construction
  std::optional<MultiMap> solution;  // delta_CE mu_k = R
  std::optional<VecQ> witness;       // y with y^T delta = 0, y^T R != 0 (flat coordinates of 3-cochains)
  std::size_t cocycle_dim = 0;       // freedom in mu_k: dim ker delta on 2-cochains
  bool extends() const { return solution.has_value(); }
};

// prefix = mu_0 ... mu_{k-1}; PRECONDITION_MC unless the prefix solves MC through order k-1
ObstructionCertificate extend_one_order(const std::vector<MultiMap>& prefix);
// checks the witness against delta_CE of mu_0
bool verify_witness(const MultiMap& mu0, const ObstructionCertificate& c);

// mu'_t(x,y) = phi_t^{-1} mu_t(phi_t x, phi_t y); NOT_INVERTIBLE unless phi_0 = id
LieSeries apply_equivalence(const LinearMapSeries& phi, const LieSeries& mu);

struct Normalization {
  LieSeries mu;
  LinearMapSeries phi;            // accumulated equivalence, mu = phi . input
  std::size_t first_nontrivial;   // lowest order with a non-exact coefficient; order()+1 when trivial
  bool trivial() const { return first_nontrivial > mu.order(); }
};
// repeatedly removes the lowest nonzero order when it is a coboundary
Normalization normalize(const LieSeries& mu);

struct RigidityVerdict {
  bool rigid = false;
  std::size_t h2 = 0;
};
RigidityVerdict rigidity_check(const MultiMap& mu0);

struct LieDeformReport {
  LieSeries mu;
  std::vector<ObstructionCertificate> orders;  // orders 2..reached
  bool obstructed = false;
  std::size_t reached = 1;  // highest order solved
  bool mu1_exact = false;   // order-1 cocycle is a coboundary
};
// extends mu_0 + t mu_1 order by order up to N; mu_1 must be a cocycle
LieDeformReport deform_lie(const MultiMap& mu0, const MultiMap& mu1, std::size_t N = 8);

// ---- linear Poisson mirror on g* = schouten(0, dim) or E* = schouten(m, k) ----

// pi with I_2(pi) = mu (point case)
SuperElement lie_poisson_tensor(const MultiMap& mu);

PoissonSeries poisson_residual(const BracketContext& ctx, const PoissonSeries& pi);

struct PoissonCertificate {
  std::size_t order = 0;
  SuperElement R;        // -1/2 sum_{i=1}^{n-1} [pi_i, pi_{n-i}]
  SuperElement d_R;      // [pi_0, R], zero by construction
  std::optional<SuperElement> solution;  // [pi_0, pi_n] = R
  std::optional<VecQ> witness;
  std::size_t search_dim = 0;  // dimension of the homogeneous search space
  bool extends() const { return solution.has_value(); }
};
// prefix pi_0 ... pi_{n-1}, all in X^{2,-1}; solution searched with coefficient degree <= degree_cap
PoissonCertificate linear_poisson_extend(const BracketContext& ctx, const std::vector<SuperElement>& prefix,
                                         int degree_cap = 2);

struct PoissonDeformReport {
  PoissonSeries pi;
  std::vector<PoissonCertificate> orders;
  bool obstructed = false;
  std::size_t reached = 1;
};
PoissonDeformReport linear_poisson_deform(const BracketContext& ctx, const SuperElement& pi0, const SuperElement& pi1,
                                          std::size_t N = 8, int degree_cap = 2);

// pi'_t = exp(-ad_{X_t}) pi_t with ad_X = [X, .]; X_t has no constant term
PoissonSeries poisson_equivalence(const BracketContext& ctx, const PoissonSeries& X, const PoissonSeries& pi);

}  // namespace dirdef
