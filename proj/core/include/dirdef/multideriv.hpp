#pragma once

#include <vector>

#include "dirdef/multimap.hpp"
#include "dirdef/superalg.hpp"

namespace dirdef {

// Sections and vector fields on the trivial bundle R^m x R^k, polynomial coefficients in x1..xm.
using Section = std::vector<SuperElement>;      // k components
using VectorField = std::vector<SuperElement>;  // m components

SuperElement apply_vector_field(const VectorField& X, const SuperElement& f);
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// Multiderivation of degree n >= -1: n+1 section arguments, symbol with n arguments.
// Degree -2 is the zero object (result of bracketing two sections).
class MultiDerivation {
 public:
  MultiDerivation() = default;
  MultiDerivation(int n, std::size_t m, std::size_t k);
  static MultiDerivation section(std::size_t m, const Section& s);
  // point case (m = 0): an (n+1)-ary map becomes a degree-n derivation
  static MultiDerivation from_multimap(const MultiMap& f);
  MultiMap to_multimap() const;  // m = 0 only
  // the bracket of vector fields on R^m as an element of Der^1(TM)
  static MultiDerivation vector_field_bracket(std::size_t m);

  int degree() const { return n_; }
  std::size_t base_dim() const { return m_; }
  std::size_t rank() const { return k_; }
  const GenPtr& ring() const { return ring_; }

  // coefficient of e_g in D(e_A), A the t-th sorted (n+1)-tuple
  SuperElement& d(std::size_t t, std::size_t g) { return d_[t * k_ + g]; }
  const SuperElement& d(std::size_t t, std::size_t g) const { return d_[t * k_ + g]; }
  // component i of sigma(e_B), B the t-th sorted n-tuple
  SuperElement& sigma(std::size_t t, std::size_t i) { return s_[t * m_ + i]; }
  const SuperElement& sigma(std::size_t t, std::size_t i) const { return s_[t * m_ + i]; }
  std::size_t n_d_tuples() const;
  std::size_t n_sigma_tuples() const;

  Section eval_frame(const std::vector<int>& idx) const;
  VectorField symbol_frame(const std::vector<int>& idx) const;
  Section eval(const std::vector<Section>& args) const;
  VectorField symbol(const std::vector<Section>& args) const;

  bool is_zero() const;
  bool operator==(const MultiDerivation& o) const;
  MultiDerivation& operator+=(const MultiDerivation& o);
  MultiDerivation& operator*=(const Rational& c);
  friend MultiDerivation operator+(MultiDerivation a, const MultiDerivation& b) { return a += b; }
  friend MultiDerivation operator-(MultiDerivation a, const MultiDerivation& b) {
    MultiDerivation nb = b;
    nb *= Rational(-1);
    return a += nb;
  }
  friend MultiDerivation operator*(const Rational& c, MultiDerivation a) { return a *= c; }

  // same data on R^m x R^(k+1), zero on the new frame element
  MultiDerivation extend_rank() const;

 private:
  int n_ = -2;
  std::size_t m_ = 0, k_ = 0;
  GenPtr ring_;
  std::vector<SuperElement> d_, s_;
};

Section frame_section(const GenPtr& ring, std::size_t k, std::size_t a);

// D1 o D2 evaluated on arbitrary sections (shuffle sum over (q+1,p)-shuffles)
Section cm_compose_eval(const MultiDerivation& D1, const MultiDerivation& D2, const std::vector<Section>& args);
// [D1,D2] = (-1)^{pq} D1 o D2 - D2 o D1; symbol read off by evaluation on an extra frame element
MultiDerivation cm_bracket(const MultiDerivation& D1, const MultiDerivation& D2);
// same bracket with the symbol assembled from the symbol law instead
MultiDerivation cm_bracket_symbol_law(const MultiDerivation& D1, const MultiDerivation& D2);

// generator set schouten(m,k) -> (m,k)
std::pair<std::size_t, std::size_t> schouten_dims(const GeneratorSet& gs);
// P in X^{j,1-j}(E*) to a degree j-1 multiderivation; NOT_HOMOGENEOUS otherwise
// j is the multivector degree; deduced from P when negative (zero P then needs it)
MultiDerivation iso_I(const SuperElement& P, int j = -1);
SuperElement iso_I_inv(const MultiDerivation& D, const GenPtr& schouten_set);

// polynomial monomials x^e with |e| <= deg in the ring, ascending
std::vector<SuperElement> monomials_upto(const GenPtr& ring, int deg);

}  // namespace dirdef
