#include "dirdef/ratlin.hpp"

#include <algorithm>
#include <sstream>

namespace dirdef {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::NotSubspace: return "NOT_SUBSPACE";
    case Errc::DegeneratePairing: return "DEGENERATE_PAIRING";
    case Errc::GeneratorMismatch: return "GENERATOR_MISMATCH";
    case Errc::UnknownGenerator: return "UNKNOWN_GENERATOR";
    case Errc::NotOddLinear: return "NOT_ODD_LINEAR";
    case Errc::WrongContext: return "WRONG_CONTEXT";
    case Errc::MissingConnection: return "MISSING_CONNECTION";
    case Errc::WrongDegree: return "WRONG_DEGREE";
    case Errc::DimMismatch: return "DIM_MISMATCH";
    case Errc::NotLie: return "NOT_LIE";
    case Errc::BundleMismatch: return "BUNDLE_MISMATCH";
    case Errc::AnchorNotSurjective: return "ANCHOR_NOT_SURJECTIVE";
    case Errc::NotHomogeneous: return "NOT_HOMOGENEOUS";
    case Errc::Order0NotLie: return "ORDER0_NOT_LIE";
    case Errc::PreconditionMC: return "PRECONDITION_MC";
    case Errc::NotInvertible: return "NOT_INVERTIBLE";
    case Errc::NotAntisymmetric: return "NOT_ANTISYMMETRIC";
    case Errc::ShapeMismatch: return "SHAPE_MISMATCH";
    case Errc::FactorMismatch: return "FACTOR_MISMATCH";
    case Errc::NotIsotropic: return "NOT_ISOTROPIC";
    case Errc::IllConditioned: return "ILL_CONDITIONED";
    case Errc::StepTooLarge: return "STEP_TOO_LARGE";
    case Errc::LeftAdmissibleSet: return "LEFT_ADMISSIBLE_SET";
    case Errc::NotAdmissible: return "NOT_ADMISSIBLE";
    case Errc::DegreeCapExceeded: return "DEGREE_CAP_EXCEEDED";
    case Errc::Shape: return "SHAPE";
    case Errc::Parse: return "PARSE";
    case Errc::AxiomViolation: return "AXIOM_VIOLATION";
  }
  return "UNKNOWN";
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (ch != ' ') t += ch;
  if (t.empty()) throw Error(Errc::Parse, "empty rational");
  if (t[0] == '+') t.erase(0, 1);
  Rational q;
  if (q.set_str(t, 10) != 0) throw Error(Errc::Parse, "bad rational '" + s + "'");
  if (q.get_den() == 0) throw Error(Errc::Parse, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

MatrixQ MatrixQ::identity(std::size_t n) {
  MatrixQ m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

MatrixQ MatrixQ::from_rows(const std::vector<VecQ>& rows, std::size_t cols) {
  MatrixQ m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(Errc::ShapeMismatch, "row length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

MatrixQ MatrixQ::from_cols(const std::vector<VecQ>& cols, std::size_t rows) {
  MatrixQ m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error(Errc::ShapeMismatch, "column length");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

VecQ MatrixQ::row(std::size_t i) const { return VecQ(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }

VecQ MatrixQ::col(std::size_t j) const {
  VecQ v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

MatrixQ MatrixQ::transpose() const {
  MatrixQ t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool MatrixQ::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool MatrixQ::operator==(const MatrixQ& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

MatrixQ operator*(const MatrixQ& a, const MatrixQ& b) {
  if (a.c_ != b.r_) throw Error(Errc::ShapeMismatch, "matrix product shape");
  MatrixQ m(a.r_, b.c_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t k = 0; k < a.c_; ++k) {
      const Rational& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
    }
  return m;
}

MatrixQ operator+(const MatrixQ& a, const MatrixQ& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) throw Error(Errc::ShapeMismatch, "matrix sum shape");
  MatrixQ m = a;
  for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] += b.a_[i];
  return m;
}

MatrixQ operator-(const MatrixQ& a, const MatrixQ& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) throw Error(Errc::ShapeMismatch, "matrix difference shape");
  MatrixQ m = a;
  for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] -= b.a_[i];
  return m;
}

VecQ operator*(const MatrixQ& a, const VecQ& x) {
  if (a.c_ != x.size()) throw Error(Errc::ShapeMismatch, "matrix-vector shape");
  VecQ y(a.r_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t j = 0; j < a.c_; ++j)
      if (sgn(x[j]) != 0) y[i] += a(i, j) * x[j];
  return y;
}

Rational dot(const VecQ& a, const VecQ& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_zero(const VecQ& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Echelon rref(const MatrixQ& M) {
  const std::size_t R = M.rows(), C = M.cols();
  // integer rows: scale by lcm of denominators
  std::vector<std::vector<mpz_class>> A(R, std::vector<mpz_class>(C));
  for (std::size_t i = 0; i < R; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < C; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), M(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < C; ++j) A[i][j] = M(i, j).get_num() * (l / M(i, j).get_den());
  }
  // Bareiss forward elimination
  std::vector<std::size_t> piv;
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && A[p][c] == 0) ++p;
    if (p == R) continue;
    std::swap(A[p], A[r]);
    for (std::size_t i = r + 1; i < R; ++i) {
      for (std::size_t j = c + 1; j < C; ++j) {
        A[i][j] = A[r][c] * A[i][j] - A[i][c] * A[r][j];
        mpz_divexact(A[i][j].get_mpz_t(), A[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      A[i][c] = 0;
    }
    // columns before c in rows below are already zero
    prev = A[r][c];
    piv.push_back(c);
    ++r;
  }
  Echelon E;
  E.pivots = piv;
  E.R = MatrixQ(r, C);
  for (std::size_t i = 0; i < r; ++i) {
    Rational inv = Rational(1) / Rational(A[i][piv[i]]);
    for (std::size_t j = 0; j < C; ++j)
      if (A[i][j] != 0) E.R(i, j) = Rational(A[i][j]) * inv;
  }
  for (std::size_t i = r; i-- > 0;) {
    for (std::size_t k = 0; k < i; ++k) {
      Rational f = E.R(k, piv[i]);
      if (sgn(f) == 0) continue;
      for (std::size_t j = piv[i]; j < C; ++j)
        if (sgn(E.R(i, j)) != 0) E.R(k, j) -= f * E.R(i, j);
    }
  }
  return E;
}

std::size_t rank(const MatrixQ& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  return rref(M).pivots.size();
}

SubspaceQ SubspaceQ::span(std::size_t ambient, const std::vector<VecQ>& vectors) {
  SubspaceQ S(ambient);
  if (vectors.empty()) return S;
  Echelon E = rref(MatrixQ::from_rows(vectors, ambient));
  for (std::size_t i = 0; i < E.pivots.size(); ++i) S.rows_.push_back(E.R.row(i));
  return S;
}

SubspaceQ SubspaceQ::full(std::size_t ambient) {
  std::vector<VecQ> v;
  MatrixQ I = MatrixQ::identity(ambient);
  for (std::size_t i = 0; i < ambient; ++i) v.push_back(I.row(i));
  return span(ambient, v);
}

VecQ SubspaceQ::coordinates(const VecQ& v) const {
  VecQ c(rows_.size());
  VecQ r = v;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::size_t p = 0;
    while (sgn(rows_[i][p]) == 0) ++p;
    c[i] = r[p];
    if (sgn(c[i]) != 0)
      for (std::size_t j = 0; j < n_; ++j) r[j] -= c[i] * rows_[i][j];
  }
  if (!is_zero(r)) throw Error(Errc::NotSubspace, "vector not in subspace");
  return c;
}

bool SubspaceQ::contains(const VecQ& v) const {
  VecQ r = v;
  for (const VecQ& row : rows_) {
    std::size_t p = 0;
    while (sgn(row[p]) == 0) ++p;
    Rational f = r[p];
    if (sgn(f) != 0)
      for (std::size_t j = 0; j < n_; ++j) r[j] -= f * row[j];
  }
  return is_zero(r);
}

bool SubspaceQ::contains(const SubspaceQ& o) const {
  if (o.n_ != n_) return false;
  return std::all_of(o.rows_.begin(), o.rows_.end(), [&](const VecQ& v) { return contains(v); });
}

SubspaceQ SubspaceQ::sum(const SubspaceQ& o) const {
  std::vector<VecQ> v = rows_;
  v.insert(v.end(), o.rows_.begin(), o.rows_.end());
  return span(n_, v);
}

SubspaceQ SubspaceQ::intersect(const SubspaceQ& o) const {
  // solve sum a_i u_i = sum b_j w_j
  const std::size_t d1 = dim(), d2 = o.dim();
  if (d1 == 0 || d2 == 0) return SubspaceQ(n_);
  MatrixQ M(n_, d1 + d2);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t r = 0; r < n_; ++r) M(r, i) = rows_[i][r];
  for (std::size_t j = 0; j < d2; ++j)
    for (std::size_t r = 0; r < n_; ++r) M(r, d1 + j) = -o.rows_[j][r];
  SubspaceQ K = kernel_basis(M);
  std::vector<VecQ> out;
  for (const VecQ& k : K.basis()) {
    VecQ v(n_);
    for (std::size_t i = 0; i < d1; ++i)
      if (sgn(k[i]) != 0)
        for (std::size_t r = 0; r < n_; ++r) v[r] += k[i] * rows_[i][r];
    out.push_back(v);
  }
  return span(n_, out);
}

SubspaceQ kernel_basis(const MatrixQ& M) {
  const std::size_t C = M.cols();
  if (M.rows() == 0) return SubspaceQ::full(C);
  Echelon E = rref(M);
  std::vector<bool> is_piv(C, false);
  for (std::size_t p : E.pivots) is_piv[p] = true;
  std::vector<VecQ> basis;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_piv[f]) continue;
    VecQ v(C);
    v[f] = 1;
    for (std::size_t i = 0; i < E.pivots.size(); ++i) v[E.pivots[i]] = -E.R(i, f);
    basis.push_back(v);
  }
  return SubspaceQ::span(C, basis);
}

SubspaceQ image(const MatrixQ& M) {
  std::vector<VecQ> cols;
  for (std::size_t j = 0; j < M.cols(); ++j) cols.push_back(M.col(j));
  return SubspaceQ::span(M.rows(), cols);
}

SolveResult solve(const MatrixQ& M, const VecQ& b) {
  const std::size_t R = M.rows(), C = M.cols();
  if (b.size() != R) throw Error(Errc::ShapeMismatch, "rhs length");
  SolveResult res;
  MatrixQ A(R, C + 1);
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < C; ++j) A(i, j) = M(i, j);
    A(i, C) = b[i];
  }
  Echelon E = rref(A);
  if (!E.pivots.empty() && E.pivots.back() == C) {
    // left kernel vector of M not orthogonal to b
    SubspaceQ left = kernel_basis(M.transpose());
    for (const VecQ& y : left.basis()) {
      if (sgn(dot(y, b)) != 0) {
        res.certificate = y;
        return res;
      }
    }
    throw Error(Errc::Parse, "internal: inconsistent system without certificate");
  }
  res.consistent = true;
  res.x.assign(C, Rational(0));
  for (std::size_t i = 0; i < E.pivots.size(); ++i) res.x[E.pivots[i]] = E.R(i, C);
  return res;
}

std::size_t quotient_dim(const SubspaceQ& A, const SubspaceQ& B) {
  if (!A.contains(B)) throw Error(Errc::NotSubspace, "quotient: B is not contained in A");
  return A.dim() - B.dim();
}

BilinearFormQ::BilinearFormQ(MatrixQ m, Kind k) : g(std::move(m)), kind(k) {
  if (g.rows() != g.cols()) throw Error(Errc::ShapeMismatch, "bilinear form must be square");
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      bool ok = k == Kind::Symmetric ? g(i, j) == g(j, i) : g(i, j) == -g(j, i);
      if (!ok) throw Error(Errc::ShapeMismatch, "bilinear form does not match its symmetry flag");
    }
}

Rational BilinearFormQ::operator()(const VecQ& a, const VecQ& b) const { return dot(a, g * b); }

SignatureNF signature_normal_form(const BilinearFormQ& form) {
  if (form.kind != BilinearFormQ::Kind::Symmetric) throw Error(Errc::ShapeMismatch, "signature needs a symmetric form");
  const std::size_t n = form.dim();
  MatrixQ A = form.g;
  MatrixQ T = MatrixQ::identity(n);
  // congruence step on column/row pair: A <- E^T A E, T <- T E
  auto add_col = [&](std::size_t dst, std::size_t src, const Rational& f) {
    // e_dst <- e_dst + f e_src
    for (std::size_t i = 0; i < n; ++i) T(i, dst) += f * T(i, src);
    for (std::size_t i = 0; i < n; ++i) A(i, dst) += f * A(i, src);
    for (std::size_t j = 0; j < n; ++j) A(dst, j) += f * A(src, j);
  };
  auto swap_idx = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < n; ++i) std::swap(T(i, a), T(i, b));
    for (std::size_t i = 0; i < n; ++i) std::swap(A(i, a), A(i, b));
    for (std::size_t j = 0; j < n; ++j) std::swap(A(a, j), A(b, j));
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && sgn(A(p, p)) == 0) ++p;
    if (p == n) {
      // no diagonal pivot left: create one from an off-diagonal entry
      bool found = false;
      for (std::size_t i = k; i < n && !found; ++i)
        for (std::size_t j = i + 1; j < n && !found; ++j)
          if (sgn(A(i, j)) != 0) {
            add_col(i, j, Rational(1));
            p = i;
            found = true;
          }
      if (!found) break;
    }
    swap_idx(k, p);
    for (std::size_t j = k + 1; j < n; ++j) {
      if (sgn(A(k, j)) == 0) continue;
      Rational f = -A(k, j) / A(k, k);
      add_col(j, k, f);
    }
  }
  SignatureNF out;
  out.T = T;
  out.D = A;
  for (std::size_t i = 0; i < n; ++i) {
    int s = sgn(A(i, i));
    if (s > 0) ++out.q_plus;
    else if (s < 0) ++out.p_minus;
    else ++out.zeros;
  }
  return out;
}

SubspaceQ annihilator(const SubspaceQ& W, const BilinearFormQ& pairing) {
  const std::size_t n = pairing.dim();
  if (W.ambient_dim() != n) throw Error(Errc::ShapeMismatch, "annihilator: ambient dimension");
  if (rank(pairing.g) != n) throw Error(Errc::DegeneratePairing, "annihilator: pairing is degenerate");
  if (W.dim() == 0) return SubspaceQ::full(n);
  std::vector<VecQ> rows;
  for (const VecQ& w : W.basis()) rows.push_back(pairing.g * w);
  return kernel_basis(MatrixQ::from_rows(rows, n));
}

}  // namespace dirdef
