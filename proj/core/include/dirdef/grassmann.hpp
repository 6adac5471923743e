#pragma once

#include <vector>

#include "dirdef/multideriv.hpp"

namespace dirdef {

// Forms on R^m x R^k live in GeneratorSet::grassmann(m,k); the odd generator e_a is theta^a.
// A superderivation of degree p, stored by its values on x^i (p-forms) and theta^a ((p+1)-forms).
class GrassmannDerivation {
 public:
  GrassmannDerivation() = default;
  GrassmannDerivation(int degree, std::size_t m, std::size_t k);

  int degree() const { return p_; }
  std::size_t base_dim() const { return m_; }
  std::size_t rank() const { return k_; }
  const GenPtr& algebra() const { return gs_; }

  SuperElement& on_function(std::size_t i) { return fx_[i]; }
  const SuperElement& on_function(std::size_t i) const { return fx_[i]; }
  SuperElement& on_generator(std::size_t a) { return fth_[a]; }
  const SuperElement& on_generator(std::size_t a) const { return fth_[a]; }

  SuperElement apply(const SuperElement& w) const;

  bool operator==(const GrassmannDerivation& o) const;
  GrassmannDerivation& operator+=(const GrassmannDerivation& o);
  GrassmannDerivation& operator*=(const Rational& c);
  friend GrassmannDerivation operator+(GrassmannDerivation a, const GrassmannDerivation& b) { return a += b; }
  friend GrassmannDerivation operator*(const Rational& c, GrassmannDerivation a) { return a *= c; }
  bool is_zero() const;

 private:
  int p_ = 0;
  std::size_t m_ = 0, k_ = 0;
  GenPtr gs_;
  std::vector<SuperElement> fx_, fth_;
};

// [A,B] = AB - (-1)^{pq} BA
GrassmannDerivation commutator(const GrassmannDerivation& A, const GrassmannDerivation& B);

// omega(s_1,...,s_r) = i_{s_r} ... i_{s_1} omega, with i_s = sum s^a d/dtheta^a (left)
SuperElement form_eval(const SuperElement& omega, const std::vector<Section>& args);
// sum over sorted r-tuples B of omega(e_B) theta_B
SuperElement form_from_values(const GenPtr& gs, std::size_t r, const std::vector<SuperElement>& values);
// polynomial-ring coefficients <-> coefficients in the form algebra
SuperElement lift_function(const SuperElement& f, const GenPtr& forms);
SuperElement lower_function(const SuperElement& f, const GenPtr& ring);

// L_D on generators: L_D x^j = sigma^j, L_D theta^a = -theta^a o D
GrassmannDerivation grassmann_L(const MultiDerivation& D);
MultiDerivation grassmann_R(const GrassmannDerivation& Dg);

// Lie algebroid differential d_E = L_m for m in Der^1(E)
GrassmannDerivation algebroid_differential(const MultiDerivation& m);
GrassmannDerivation de_rham(std::size_t m);

// K: vector-valued r-form, K[a] the r-form component along e_a; i_K has degree r-1
GrassmannDerivation insertion(const std::vector<SuperElement>& K, std::size_t m, int r);
// L_K = [i_K, d]
GrassmannDerivation lie_derivative(const std::vector<SuperElement>& K, int r, const GrassmannDerivation& d);

struct Decomposition {
  std::vector<SuperElement> K;  // degree-p forms, one per coordinate
  std::vector<SuperElement> L;  // degree-(p+1) forms
};
// D = L_K + i_L on E = TM with the de Rham differential; ANCHOR_NOT_SURJECTIVE when rank != base dim
Decomposition algebraic_decompose(const GrassmannDerivation& D);

}  // namespace dirdef
