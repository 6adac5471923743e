#pragma once

#include <vector>

#include "dirdef/error.hpp"
#include "dirdef/ratlin.hpp"

namespace dirdef {

// Truncated formal power series a_0 + a_1 t + ... + a_N t^N over a coefficient type T
// supporting +, - and scalar multiplication by Rational.
template <class T>
class FormalSeries {
 public:
  FormalSeries() = default;
  FormalSeries(std::size_t order, const T& zero) : c_(order + 1, zero), zero_(zero) {}
  explicit FormalSeries(std::vector<T> coeffs, const T& zero) : c_(std::move(coeffs)), zero_(zero) {
    if (c_.empty()) throw Error(Errc::Shape, "series needs at least one coefficient");
  }

  std::size_t order() const { return c_.size() - 1; }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<T>& coeffs() const { return c_; }
  const T& zero() const { return zero_; }

  FormalSeries& operator+=(const FormalSeries& o) {
    same_order(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    return *this;
  }
  FormalSeries& operator-=(const FormalSeries& o) {
    same_order(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    return *this;
  }
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
  friend FormalSeries operator*(const Rational& s, FormalSeries a) {
    for (auto& x : a.c_) x = s * x;
    return a;
  }
  bool operator==(const FormalSeries& o) const { return c_ == o.c_; }

 private:
  void same_order(const FormalSeries& o) const {
    if (o.c_.size() != c_.size()) throw Error(Errc::Shape, "series of different truncation order");
  }
  std::vector<T> c_;
  T zero_;
};

// Cauchy product sum_{i+j=n} mul(a_i, b_j), truncated at the smaller order
template <class A, class B, class Mul, class R = decltype(std::declval<Mul>()(std::declval<A>(), std::declval<B>()))>
FormalSeries<R> cauchy(const FormalSeries<A>& a, const FormalSeries<B>& b, Mul mul, const R& zero) {
  const std::size_t N = std::min(a.order(), b.order());
  FormalSeries<R> r(N, zero);
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t i = 0; i <= n; ++i) r[n] = r[n] + mul(a[i], b[n - i]);
  return r;
}

// multiplicative inverse for an associative coefficient ring; a_0 must equal `one`
template <class T, class Mul>
FormalSeries<T> series_inverse(const FormalSeries<T>& a, const T& one, Mul mul) {
  if (!(a[0] == one)) throw Error(Errc::NotInvertible, "series must start with the identity");
  FormalSeries<T> b(a.order(), a.zero());
  b[0] = one;
  for (std::size_t n = 1; n <= a.order(); ++n) {
    T s = a.zero();
    for (std::size_t i = 1; i <= n; ++i) s = s + mul(a[i], b[n - i]);
    b[n] = Rational(-1) * s;
  }
  return b;
}

// exp(a) = sum a^j / j!, a_0 = 0
template <class T, class Mul>
FormalSeries<T> series_exp(const FormalSeries<T>& a, const T& one, Mul mul) {
  if (!(a[0] == a.zero())) throw Error(Errc::Shape, "exp needs a series without constant term");
  FormalSeries<T> r(a.order(), a.zero()), pw(a.order(), a.zero());
  pw[0] = one;
  r[0] = one;
  Rational fact = 1;
  for (std::size_t j = 1; j <= a.order(); ++j) {
    pw = cauchy(pw, a, mul, a.zero());
    fact *= Rational(long(j));
    r += Rational(1) / fact * pw;
  }
  return r;
}

// log(a) for a_0 = one: sum (-1)^{j+1} (a - 1)^j / j
template <class T, class Mul>
FormalSeries<T> series_log(const FormalSeries<T>& a, const T& one, Mul mul) {
  if (!(a[0] == one)) throw Error(Errc::Shape, "log needs a series starting with the identity");
  FormalSeries<T> u = a;
  u[0] = a.zero();
  FormalSeries<T> r(a.order(), a.zero()), pw = u;
  for (std::size_t j = 1; j <= a.order(); ++j) {
    r += frac(j % 2 ? 1 : -1, long(j)) * pw;
    pw = cauchy(pw, u, mul, a.zero());
  }
  return r;
}

}  // namespace dirdef
