#pragma once

#include <array>
#include <tuple>
#include <vector>

#include "dirdef/ratlin.hpp"

namespace dirdef {

// Sorted index tuples of a fixed size drawn from {0..dim-1}, in lexicographic order.
const std::vector<std::vector<int>>& sorted_tuples(std::size_t size, std::size_t dim);
std::size_t tuple_index(const std::vector<int>& sorted, std::size_t dim);
// sorts idx in place; returns the permutation sign, or 0 on a repeated index
int sort_with_sign(std::vector<int>& idx);

// Antisymmetric multilinear map V^n -> V, coefficients c^g_{a1<...<an}.
class MultiMap {
 public:
  MultiMap() = default;
  MultiMap(std::size_t arity, std::size_t dim);
  // {(a, b, g, value)} with c^g_{ab} = value and c^g_{ba} = -value
  static MultiMap from_constants(std::size_t dim, const std::vector<std::tuple<int, int, int, Rational>>& c);
  static MultiMap from_flat(std::size_t arity, std::size_t dim, const VecQ& v);
  static MultiMap identity(std::size_t dim);

  std::size_t arity() const { return n_; }
  std::size_t dim() const { return d_; }
  std::size_t size() const { return c_.size(); }
  const VecQ& flat() const { return c_; }
  VecQ& flat() { return c_; }

  Rational& at(std::size_t tuple, std::size_t g) { return c_[tuple * d_ + g]; }
  const Rational& at(std::size_t tuple, std::size_t g) const { return c_[tuple * d_ + g]; }
  // any index order; antisymmetry applied
  Rational coeff(std::vector<int> idx, std::size_t g) const;
  VecQ eval_basis(const std::vector<int>& idx) const;
  VecQ eval(const std::vector<VecQ>& args) const;

  bool is_zero() const;
  bool operator==(const MultiMap& o) const { return n_ == o.n_ && d_ == o.d_ && c_ == o.c_; }
  MultiMap& operator+=(const MultiMap& o);
  MultiMap& operator-=(const MultiMap& o);
  MultiMap& operator*=(const Rational& s);
  friend MultiMap operator+(MultiMap a, const MultiMap& b) { return a += b; }
  friend MultiMap operator-(MultiMap a, const MultiMap& b) { return a -= b; }
  friend MultiMap operator*(const Rational& s, MultiMap a) { return a *= s; }

 private:
  std::size_t n_ = 0, d_ = 0;
  VecQ c_;
};

// Full multilinear map V^n -> V.
class NonSymMultiMap {
 public:
  NonSymMultiMap() = default;
  NonSymMultiMap(std::size_t arity, std::size_t dim);
  static NonSymMultiMap from_multimap(const MultiMap& f);

  std::size_t arity() const { return n_; }
  std::size_t dim() const { return d_; }
  Rational& at(const std::vector<int>& idx, std::size_t g);
  const Rational& at(const std::vector<int>& idx, std::size_t g) const;
  VecQ eval_basis(const std::vector<int>& idx) const;
  bool is_zero() const;
  bool operator==(const NonSymMultiMap& o) const { return n_ == o.n_ && d_ == o.d_ && c_ == o.c_; }
  NonSymMultiMap& operator+=(const NonSymMultiMap& o);
  NonSymMultiMap& operator*=(const Rational& s);
  friend NonSymMultiMap operator+(NonSymMultiMap a, const NonSymMultiMap& b) { return a += b; }
  friend NonSymMultiMap operator*(const Rational& s, NonSymMultiMap a) { return a *= s; }
  // enumerate all index tuples
  std::size_t n_tuples() const;
  std::vector<int> unrank(std::size_t t) const;

 private:
  std::size_t offset(const std::vector<int>& idx) const;
  std::size_t n_ = 0, d_ = 0;
  VecQ c_;
};

MultiMap diamond(const MultiMap& f, const MultiMap& g);
MultiMap nr_bracket(const MultiMap& f, const MultiMap& g);

NonSymMultiMap compose_at(const NonSymMultiMap& f, std::size_t i, const NonSymMultiMap& g);  // f o_i g, i 1-based
NonSymMultiMap gerstenhaber_product(const NonSymMultiMap& f, const NonSymMultiMap& g);
NonSymMultiMap gerstenhaber_bracket(const NonSymMultiMap& f, const NonSymMultiMap& g);

// two-sum Chevalley-Eilenberg formula; throws NOT_LIE when mu fails Jacobi
MultiMap ce_differential(const MultiMap& mu, const MultiMap& f);
MultiMap ce_differential_unchecked(const MultiMap& mu, const MultiMap& f);
bool is_lie(const MultiMap& mu);

// matrix of delta_CE : A^k -> A^{k+1} in the flat coordinates
MatrixQ ce_matrix(const MultiMap& mu, std::size_t k);

struct Cohomology {
  std::size_t dim = 0;
  std::size_t cocycles = 0;    // dim ker delta^k
  std::size_t coboundaries = 0;  // dim im delta^{k-1}
  std::vector<MultiMap> representatives;
};
Cohomology cohomology(const MultiMap& mu, std::size_t k);

}  // namespace dirdef
