#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dirdef/error.hpp"

namespace dirdef {

using Rational = mpq_class;
using VecQ = std::vector<Rational>;

inline Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

// Dense row-major rational matrix.
class MatrixQ {
 public:
  MatrixQ() = default;
  MatrixQ(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static MatrixQ identity(std::size_t n);
  static MatrixQ from_rows(const std::vector<VecQ>& rows, std::size_t cols);
  static MatrixQ from_cols(const std::vector<VecQ>& cols, std::size_t rows);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  VecQ row(std::size_t i) const;
  VecQ col(std::size_t j) const;
  MatrixQ transpose() const;
  bool is_zero() const;
  bool operator==(const MatrixQ& o) const;

  friend MatrixQ operator*(const MatrixQ& a, const MatrixQ& b);
  friend MatrixQ operator+(const MatrixQ& a, const MatrixQ& b);
  friend MatrixQ operator-(const MatrixQ& a, const MatrixQ& b);
  friend VecQ operator*(const MatrixQ& a, const VecQ& x);
  friend MatrixQ operator*(const Rational& s, MatrixQ a) {
    for (auto& x : a.a_) x *= s;
    return a;
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Rational> a_;
};

Rational dot(const VecQ& a, const VecQ& b);
bool is_zero(const VecQ& v);

struct Echelon {
  MatrixQ R;                       // reduced row echelon form, rank rows kept
  std::vector<std::size_t> pivots;  // pivot column of each row
};

// Fraction-free elimination on the integer-scaled rows, then exact back substitution.
Echelon rref(const MatrixQ& M);
std::size_t rank(const MatrixQ& M);

// Subspace of Q^n kept in canonical reduced echelon form.
class SubspaceQ {
 public:
  explicit SubspaceQ(std::size_t ambient = 0) : n_(ambient) {}
  static SubspaceQ span(std::size_t ambient, const std::vector<VecQ>& vectors);
  static SubspaceQ full(std::size_t ambient);

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<VecQ>& basis() const { return rows_; }
  bool contains(const VecQ& v) const;
  bool contains(const SubspaceQ& o) const;
  SubspaceQ sum(const SubspaceQ& o) const;
  SubspaceQ intersect(const SubspaceQ& o) const;
  // coordinates of v in basis(); v must lie in the subspace
  VecQ coordinates(const VecQ& v) const;
  bool operator==(const SubspaceQ& o) const { return n_ == o.n_ && rows_ == o.rows_; }

 private:
  std::size_t n_;
  std::vector<VecQ> rows_;
};

SubspaceQ kernel_basis(const MatrixQ& M);
SubspaceQ image(const MatrixQ& M);

struct SolveResult {
  bool consistent = false;
  VecQ x;            // M x = b when consistent
  VecQ certificate;  // y^T M = 0, y^T b != 0 otherwise
};

SolveResult solve(const MatrixQ& M, const VecQ& b);

std::size_t quotient_dim(const SubspaceQ& A, const SubspaceQ& B);

struct BilinearFormQ {
  enum class Kind { Symmetric, Antisymmetric };
  MatrixQ g;
  Kind kind = Kind::Symmetric;

  BilinearFormQ() = default;
  BilinearFormQ(MatrixQ m, Kind k);
  Rational operator()(const VecQ& a, const VecQ& b) const;
  std::size_t dim() const { return g.rows(); }
};

struct SignatureNF {
  std::size_t q_plus = 0, p_minus = 0, zeros = 0;
  MatrixQ T;  // T^T g T = D
  MatrixQ D;
};

SignatureNF signature_normal_form(const BilinearFormQ& g);

SubspaceQ annihilator(const SubspaceQ& W, const BilinearFormQ& pairing);

}  // namespace dirdef
