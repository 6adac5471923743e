#pragma once

#include <cstddef>
#include <vector>

#include "dirdef/dirac_linear.hpp"
#include "dirdef/dirac_numeric.hpp"
#include "dirdef/superalg.hpp"

namespace dirdef {

using VecD = std::vector<double>;

struct VelocityResult {
  bool admissible = false;
  VecD xdot;               // least-norm solution
  MatD gauge;              // n x g, columns span L cap V
  double gap = 0;          // least-squares residual of the solve
  double dH_along_xdot = 0;  // <dH, xdot>
};

// Implicit Hamiltonian system (xdot, dH) in L for a constant Dirac structure on R^n.
// H lives in GeneratorSet::polynomial(n).
class IHSystem {
 public:
  IHSystem(LinearDirac L, SuperElement H, double h = 1e-3, double tol = 1e-9);

  std::size_t n() const { return L_.n(); }
  const LinearDirac& dirac() const { return L_; }
  const SuperElement& hamiltonian() const { return H_; }
  double step() const { return h_; }
  double tolerance() const { return tol_; }

  double energy(const VecD& x) const;
  VecD gradient(const VecD& x) const;
  // g_i^* dH for a basis g_i of L cap V; zero on the admissible set
  VecD constraint_residuals(const VecD& x) const;
  VelocityResult velocity_solve(const VecD& x) const;

 private:
  LinearDirac L_;
  SuperElement H_;
  std::vector<SuperElement> dH_;
  double h_, tol_;
  MatD a_, alpha_;  // rows: V and V* parts of a basis of L
  MatD gauge_;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<VecD> x;
  std::vector<double> H;
  std::vector<double> constraint;  // max |g_i^* dH| at each sample
  double max_drift = 0;
  double max_gap = 0;
};

// RK4 with least-norm velocities; throws LeftAdmissibleSet when a stage point is not admissible
Trajectory integrate(const IHSystem& s, const VecD& x0, std::size_t steps);

// df in rho*(L) (x) polynomials, coefficient by coefficient
bool is_admissible(const LinearDirac& L, const SuperElement& f);
// a polynomial vector field X with (X, df) in L; throws NotAdmissible
std::vector<SuperElement> hamiltonian_vector_field(const LinearDirac& L, const SuperElement& f);
// {f, g} = Omega_L(X_f, X_g) = X_g(f); throws NotAdmissible
SuperElement admissible_bracket(const LinearDirac& L, const SuperElement& f, const SuperElement& g);

}  // namespace dirdef
