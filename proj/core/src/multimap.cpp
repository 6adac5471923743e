#include "dirdef/multimap.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

namespace dirdef {

namespace {

void gen_tuples(std::size_t size, std::size_t dim, std::size_t start, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
  if (cur.size() == size) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < dim; ++i) {
    cur.push_back(int(i));
    gen_tuples(size, dim, i + 1, cur, out);
    cur.pop_back();
  }
}

struct TupleTable {
  std::vector<std::vector<int>> tuples;
  std::map<std::vector<int>, std::size_t> index;
};

const TupleTable& table(std::size_t size, std::size_t dim) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, TupleTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({size, dim});
  if (it != cache.end()) return it->second;
  TupleTable t;
  std::vector<int> cur;
  gen_tuples(size, dim, 0, cur, t.tuples);
  for (std::size_t i = 0; i < t.tuples.size(); ++i) t.index[t.tuples[i]] = i;
  return cache.emplace(std::make_pair(size, dim), std::move(t)).first->second;
}

Rational det(const std::vector<VecQ>& rows, const std::vector<int>& cols) {
  const std::size_t n = cols.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rational s = 0;
  do {
    std::vector<int> p = perm;
    int sign = sort_with_sign(p);
    Rational t = sign;
    for (std::size_t i = 0; i < n && sgn(t) != 0; ++i) t *= rows[i][cols[perm[i]]];
    s += t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s;
}

// all subsets of positions {0..n-1} of given size, with the sign of the shuffle putting them first
template <class F>
void for_each_shuffle(std::size_t n, std::size_t first, F&& f) {
  if (first > n) return;
  for (const auto& sel : sorted_tuples(first, n)) {
    std::vector<int> rest;
    std::size_t inv = 0;
    std::vector<bool> in(n, false);
    for (std::size_t k = 0; k < sel.size(); ++k) {
      in[sel[k]] = true;
      inv += std::size_t(sel[k]) - k;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!in[i]) rest.push_back(int(i));
    f(sel, rest, (inv & 1) ? -1 : 1);
  }
}

}  // namespace

const std::vector<std::vector<int>>& sorted_tuples(std::size_t size, std::size_t dim) { return table(size, dim).tuples; }

std::size_t tuple_index(const std::vector<int>& sorted, std::size_t dim) { return table(sorted.size(), dim).index.at(sorted); }

int sort_with_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

MultiMap::MultiMap(std::size_t arity, std::size_t dim) : n_(arity), d_(dim) {
  c_.assign(sorted_tuples(arity, dim).size() * dim, Rational(0));
}

MultiMap MultiMap::from_constants(std::size_t dim, const std::vector<std::tuple<int, int, int, Rational>>& c) {
  MultiMap m(2, dim);
  for (const auto& [a, b, g, v] : c) {
    if (a < 0 || b < 0 || g < 0 || std::size_t(std::max({a, b, g})) >= dim)
      throw Error(Errc::DimMismatch, "structure constant index out of range");
    if (a == b) {
      if (sgn(v) != 0) throw Error(Errc::NotAntisymmetric, "c^g_{aa} must vanish");
      continue;
    }
    std::vector<int> idx{a, b};
    int s = sort_with_sign(idx);
    Rational& slot = m.at(tuple_index(idx, dim), std::size_t(g));
    Rational val = s * v;
    if (sgn(slot) != 0 && slot != val) throw Error(Errc::NotAntisymmetric, "conflicting structure constants");
    slot = val;
  }
  return m;
}

MultiMap MultiMap::from_flat(std::size_t arity, std::size_t dim, const VecQ& v) {
  MultiMap m(arity, dim);
  if (v.size() != m.c_.size()) throw Error(Errc::DimMismatch, "flat vector length");
  m.c_ = v;
  return m;
}

MultiMap MultiMap::identity(std::size_t dim) {
  MultiMap m(1, dim);
  for (std::size_t a = 0; a < dim; ++a) m.at(a, a) = 1;
  return m;
}

Rational MultiMap::coeff(std::vector<int> idx, std::size_t g) const {
  int s = sort_with_sign(idx);
  if (s == 0) return 0;
  Rational v = at(tuple_index(idx, d_), g);
  return s > 0 ? v : Rational(-v);
}

VecQ MultiMap::eval_basis(const std::vector<int>& idx) const {
  std::vector<int> s = idx;
  int sign = sort_with_sign(s);
  VecQ out(d_);
  if (sign == 0) return out;
  std::size_t t = tuple_index(s, d_);
  for (std::size_t g = 0; g < d_; ++g) out[g] = sign * at(t, g);
  return out;
}

VecQ MultiMap::eval(const std::vector<VecQ>& args) const {
  if (args.size() != n_) throw Error(Errc::DimMismatch, "wrong number of arguments");
  VecQ out(d_);
  const auto& tup = sorted_tuples(n_, d_);
  for (std::size_t t = 0; t < tup.size(); ++t) {
    Rational w = n_ == 0 ? Rational(1) : det(args, tup[t]);
    if (sgn(w) == 0) continue;
    for (std::size_t g = 0; g < d_; ++g) out[g] += w * at(t, g);
  }
  return out;
}

bool MultiMap::is_zero() const { return dirdef::is_zero(c_); }

MultiMap& MultiMap::operator+=(const MultiMap& o) {
  if (n_ != o.n_ || d_ != o.d_) throw Error(Errc::DimMismatch, "sum of different shapes");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

MultiMap& MultiMap::operator-=(const MultiMap& o) {
  if (n_ != o.n_ || d_ != o.d_) throw Error(Errc::DimMismatch, "difference of different shapes");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

MultiMap& MultiMap::operator*=(const Rational& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

// ---- non-symmetric maps ----

NonSymMultiMap::NonSymMultiMap(std::size_t arity, std::size_t dim) : n_(arity), d_(dim) {
  std::size_t t = 1;
  for (std::size_t i = 0; i < arity; ++i) t *= dim;
  c_.assign(t * dim, Rational(0));
}

NonSymMultiMap NonSymMultiMap::from_multimap(const MultiMap& f) {
  NonSymMultiMap m(f.arity(), f.dim());
  for (std::size_t t = 0; t < m.n_tuples(); ++t) {
    auto idx = m.unrank(t);
    VecQ v = f.eval_basis(idx);
    for (std::size_t g = 0; g < f.dim(); ++g) m.at(idx, g) = v[g];
  }
  return m;
}

std::size_t NonSymMultiMap::n_tuples() const { return c_.size() / (d_ ? d_ : 1); }

std::vector<int> NonSymMultiMap::unrank(std::size_t t) const {
  std::vector<int> idx(n_);
  for (std::size_t i = n_; i-- > 0;) {
    idx[i] = int(t % d_);
    t /= d_;
  }
  return idx;
}

std::size_t NonSymMultiMap::offset(const std::vector<int>& idx) const {
  std::size_t o = 0;
  for (int x : idx) o = o * d_ + std::size_t(x);
  return o * d_;
}

Rational& NonSymMultiMap::at(const std::vector<int>& idx, std::size_t g) { return c_[offset(idx) + g]; }
const Rational& NonSymMultiMap::at(const std::vector<int>& idx, std::size_t g) const { return c_[offset(idx) + g]; }

VecQ NonSymMultiMap::eval_basis(const std::vector<int>& idx) const {
  std::size_t o = offset(idx);
  return VecQ(c_.begin() + o, c_.begin() + o + d_);
}

bool NonSymMultiMap::is_zero() const { return dirdef::is_zero(c_); }

NonSymMultiMap& NonSymMultiMap::operator+=(const NonSymMultiMap& o) {
  if (n_ != o.n_ || d_ != o.d_) throw Error(Errc::DimMismatch, "sum of different shapes");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

NonSymMultiMap& NonSymMultiMap::operator*=(const Rational& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

// ---- brackets ----

MultiMap diamond(const MultiMap& f, const MultiMap& g) {
  if (f.dim() != g.dim()) throw Error(Errc::DimMismatch, "bracket of maps on different spaces");
  const std::size_t m = f.arity(), n = g.arity(), d = f.dim();
  if (m == 0) return MultiMap(n == 0 ? 0 : n - 1, d);  // no shuffles; shape only matters for n >= 1
  MultiMap r(m + n - 1, d);
  const auto& tup = sorted_tuples(m + n - 1, d);
  for (std::size_t t = 0; t < tup.size(); ++t) {
    const auto& I = tup[t];
    for_each_shuffle(I.size(), n, [&](const std::vector<int>& sel, const std::vector<int>& rest, int sign) {
      std::vector<int> gi;
      for (int s : sel) gi.push_back(I[s]);
      VecQ gv = g.eval_basis(gi);
      for (std::size_t c = 0; c < d; ++c) {
        if (sgn(gv[c]) == 0) continue;
        std::vector<int> fi{int(c)};
        for (int s : rest) fi.push_back(I[s]);
        VecQ fv = f.eval_basis(fi);
        for (std::size_t h = 0; h < d; ++h)
          if (sgn(fv[h]) != 0) r.at(t, h) += sign * gv[c] * fv[h];
      }
    });
  }
  return r;
}

MultiMap nr_bracket(const MultiMap& f, const MultiMap& g) {
  const std::size_t m = f.arity(), n = g.arity();
  if (m + n == 0) return MultiMap(0, f.dim());  // A^{-1} = 0; represented by the zero vector
  MultiMap a = diamond(f, g), b = diamond(g, f);
  int s = ((m + 1) * (n + 1)) % 2 ? -1 : 1;  // (m-1)(n-1) parity
  if (a.arity() != b.arity()) {
    // one side has no shuffles (arity 0 operand); use the shape of the nonempty side
    if (m == 0) a = MultiMap(b.arity(), b.dim());
    else b = MultiMap(a.arity(), a.dim());
  }
  return a - Rational(s) * b;
}

NonSymMultiMap compose_at(const NonSymMultiMap& f, std::size_t i, const NonSymMultiMap& g) {
  if (f.dim() != g.dim()) throw Error(Errc::DimMismatch, "composition of maps on different spaces");
  const std::size_t m = f.arity(), n = g.arity(), d = f.dim();
  if (i < 1 || i > m) throw Error(Errc::DimMismatch, "composition slot out of range");
  NonSymMultiMap r(m + n - 1, d);
  for (std::size_t t = 0; t < r.n_tuples(); ++t) {
    auto x = r.unrank(t);
    std::vector<int> gi(x.begin() + long(i - 1), x.begin() + long(i - 1 + n));
    VecQ gv = g.eval_basis(gi);
    for (std::size_t c = 0; c < d; ++c) {
      if (sgn(gv[c]) == 0) continue;
      std::vector<int> fi(x.begin(), x.begin() + long(i - 1));
      fi.push_back(int(c));
      fi.insert(fi.end(), x.begin() + long(i - 1 + n), x.end());
      VecQ fv = f.eval_basis(fi);
      for (std::size_t h = 0; h < d; ++h) r.at(x, h) += gv[c] * fv[h];
    }
  }
  return r;
}

NonSymMultiMap gerstenhaber_product(const NonSymMultiMap& f, const NonSymMultiMap& g) {
  const std::size_t m = f.arity(), n = g.arity();
  NonSymMultiMap r(m + n - 1, f.dim());
  for (std::size_t i = 1; i <= m; ++i) {
    int s = ((i - 1) * (n + 1)) % 2 ? -1 : 1;
    r += Rational(s) * compose_at(f, i, g);
  }
  return r;
}

NonSymMultiMap gerstenhaber_bracket(const NonSymMultiMap& f, const NonSymMultiMap& g) {
  if (f.dim() != g.dim()) throw Error(Errc::DimMismatch, "bracket of maps on different spaces");
  const std::size_t m = f.arity(), n = g.arity();
  if (m == 0 || n == 0) throw Error(Errc::DimMismatch, "gerstenhaber bracket needs positive arities");
  int s = ((m + 1) * (n + 1)) % 2 ? -1 : 1;
  return gerstenhaber_product(f, g) + Rational(-s) * gerstenhaber_product(g, f);
}

MultiMap ce_differential_unchecked(const MultiMap& mu, const MultiMap& f) {
  if (mu.arity() != 2 || mu.dim() != f.dim()) throw Error(Errc::DimMismatch, "ce differential shapes");
  const std::size_t n = f.arity(), d = f.dim();
  MultiMap r(n + 1, d);
  const auto& tup = sorted_tuples(n + 1, d);
  for (std::size_t t = 0; t < tup.size(); ++t) {
    const auto& x = tup[t];
    VecQ acc(d);
    for (std::size_t i = 0; i < n + 1; ++i) {
      std::vector<int> rest;
      for (std::size_t k = 0; k < n + 1; ++k)
        if (k != i) rest.push_back(x[k]);
      VecQ fv = f.eval_basis(rest);
      int s = i % 2 ? -1 : 1;  // (-1)^{i+1} with 1-based i
      for (std::size_t c = 0; c < d; ++c) {
        if (sgn(fv[c]) == 0) continue;
        VecQ mv = mu.eval_basis({x[i], int(c)});
        for (std::size_t h = 0; h < d; ++h) acc[h] += s * fv[c] * mv[h];
      }
    }
    for (std::size_t i = 0; i < n + 1; ++i)
      for (std::size_t j = i + 1; j < n + 1; ++j) {
        VecQ mv = mu.eval_basis({x[i], x[j]});
        int s = (i + j) % 2 ? -1 : 1;  // (-1)^{i+j} is invariant under the 1-based shift
        for (std::size_t c = 0; c < d; ++c) {
          if (sgn(mv[c]) == 0) continue;
          std::vector<int> args{int(c)};
          for (std::size_t k = 0; k < n + 1; ++k)
            if (k != i && k != j) args.push_back(x[k]);
          VecQ fv = f.eval_basis(args);
          for (std::size_t h = 0; h < d; ++h) acc[h] += s * mv[c] * fv[h];
        }
      }
    for (std::size_t h = 0; h < d; ++h) r.at(t, h) = acc[h];
  }
  return r;
}

bool is_lie(const MultiMap& mu) { return mu.arity() == 2 && nr_bracket(mu, mu).is_zero(); }

MultiMap ce_differential(const MultiMap& mu, const MultiMap& f) {
  if (!is_lie(mu)) throw Error(Errc::NotLie, "structure constants violate the Jacobi identity");
  return ce_differential_unchecked(mu, f);
}

MatrixQ ce_matrix(const MultiMap& mu, std::size_t k) {
  const std::size_t d = mu.dim();
  MultiMap probe(k, d);
  MultiMap target(k + 1, d);
  MatrixQ M(target.size(), probe.size());
  for (std::size_t j = 0; j < probe.size(); ++j) {
    MultiMap e(k, d);
    e.flat()[j] = 1;
    MultiMap img = ce_differential_unchecked(mu, e);
    for (std::size_t i = 0; i < img.size(); ++i) M(i, j) = img.flat()[i];
  }
  return M;
}

Cohomology cohomology(const MultiMap& mu, std::size_t k) {
  if (!is_lie(mu)) throw Error(Errc::NotLie, "structure constants violate the Jacobi identity");
  const std::size_t d = mu.dim();
  Cohomology h;
  SubspaceQ Z = kernel_basis(ce_matrix(mu, k));
  SubspaceQ B(MultiMap(k, d).size());
  if (k > 0) B = image(ce_matrix(mu, k - 1));
  h.cocycles = Z.dim();
  h.coboundaries = B.dim();
  h.dim = quotient_dim(Z, B);
  SubspaceQ acc = B;
  for (const VecQ& z : Z.basis()) {
    if (acc.contains(z)) continue;
    acc = acc.sum(SubspaceQ::span(z.size(), {z}));
    h.representatives.push_back(MultiMap::from_flat(k, d, z));
  }
  return h;
}

}  // namespace dirdef
