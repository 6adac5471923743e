#pragma once

#include <cstddef>
#include <vector>

#include "dirdef/ratlin.hpp"

namespace dirdef {

// V + V* with coordinates (x, eta), x in Q^n first.
struct PairedSpace {
  std::size_t n = 0;

  explicit PairedSpace(std::size_t dim) : n(dim) {}
  // <(x,eta),(y,mu)> = eta(y) + mu(x)
  BilinearFormQ pairing() const;
  Rational pair(const VecQ& a, const VecQ& b) const;
  // eta(y) - mu(x)
  Rational pair_minus(const VecQ& a, const VecQ& b) const;
};

bool is_isotropic(const SubspaceQ& L, const BilinearFormQ& form);

class LinearDirac {
 public:
  // throws ShapeMismatch on ambient size, NotIsotropic unless maximal isotropic
  LinearDirac(std::size_t n, SubspaceQ L);
  static LinearDirac tangent(std::size_t n);
  static LinearDirac cotangent(std::size_t n);

  std::size_t n() const { return n_; }
  const SubspaceQ& subspace() const { return L_; }
  bool operator==(const LinearDirac& o) const { return n_ == o.n_ && L_ == o.L_; }

 private:
  std::size_t n_;
  SubspaceQ L_;
};

// omega^flat(x) = omega(x, .), i.e. eta = omega^T x
LinearDirac from_two_form(const MatrixQ& omega);
// x = pi(eta, .) = pi^T eta
LinearDirac from_bivector(const MatrixQ& pi);

SubspaceQ rho(const LinearDirac& L);        // projection to V
SubspaceQ rho_star(const LinearDirac& L);   // projection to V*
SubspaceQ in_V(const LinearDirac& L);       // L cap V, as a subspace of Q^n
SubspaceQ in_V_star(const LinearDirac& L);  // L cap V*
// annihilator of S in the dual space, dot pairing
SubspaceQ dual_annihilator(const SubspaceQ& S);

// Omega in the basis R.basis(); pi in the basis of dual_annihilator(K)
struct RangeForm {
  SubspaceQ R;
  MatrixQ omega;
};
struct KernelBivector {
  SubspaceQ K;
  MatrixQ pi;
};
struct Representation {
  RangeForm range;
  KernelBivector kernel;
};

Representation represent(const LinearDirac& L);
LinearDirac from_R_Omega(const RangeForm& r);
LinearDirac from_K_pi(const KernelBivector& k);

// phi : V -> W as a (dim W) x (dim V) matrix
LinearDirac forward_map(const MatrixQ& phi, const LinearDirac& LV);
LinearDirac backward_map(const MatrixQ& phi, const LinearDirac& LW);

// maximal isotropic subspace of E1 x E2bar, coordinates (x1, eta1, x2, eta2)
class CanonicalRelation {
 public:
  CanonicalRelation(std::size_t n1, std::size_t n2, SubspaceQ L);
  static CanonicalRelation identity(std::size_t n);
  static CanonicalRelation of(const LinearDirac& L);  // E x 0bar
  static CanonicalRelation forward(const MatrixQ& phi);   // in E_W x E_Vbar
  static CanonicalRelation backward(const MatrixQ& phi);  // in E_V x E_Wbar

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  const SubspaceQ& subspace() const { return L_; }
  LinearDirac as_dirac() const;  // needs n2 = 0
  bool operator==(const CanonicalRelation& o) const { return n1_ == o.n1_ && n2_ == o.n2_ && L_ == o.L_; }

 private:
  std::size_t n1_, n2_;
  SubspaceQ L_;
};

BilinearFormQ product_pairing(std::size_t n1, std::size_t n2);
CanonicalRelation compose_relations(const CanonicalRelation& L1, const CanonicalRelation& L2);

LinearDirac forward_map_relational(const MatrixQ& phi, const LinearDirac& LV);
LinearDirac backward_map_relational(const MatrixQ& phi, const LinearDirac& LW);

struct HyperbolicCompletion {
  std::vector<VecQ> w, v;  // (w_i, v_j) = delta_ij, (v_i, v_j) = 0
  SubspaceQ U;             // orthogonal complement of all the hyperbolic planes
};

HyperbolicCompletion hyperbolic_completion(const BilinearFormQ& form, const SubspaceQ& W);

struct IsotropicExtension {
  SubspaceQ maximal;
  std::size_t bound = 0;  // min(q, p)
  // false when no rational isotropic vector was found in the remaining complement
  bool complete = false;
};

IsotropicExtension extend_isotropic(const BilinearFormQ& form, const SubspaceQ& W);

// tau_B(x, alpha) = (x, alpha + B^flat x)
MatrixQ gauge_matrix(const MatrixQ& B);
LinearDirac gauge_transform(const MatrixQ& B, const LinearDirac& L);

}  // namespace dirdef
