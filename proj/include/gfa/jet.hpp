#pragma once

// Truncated Taylor series ("jets") for forward-mode derivatives of any order.
// Jet<double> carries f(x0), f'(x0)/1!, f''(x0)/2!, ...; Jet<Jet<double>> is
// the bivariate version (outer variable x, inner variable y).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "gfa/asymptotics.hpp"

namespace gfa {

template <class T>
class Jet;

inline double primal(double v) { return v; }
template <class T>
double primal(const Jet<T>& j) {
  return primal(j.c[0]);
}

template <class T>
class Jet {
public:
  std::vector<T> c;  // normalized coefficients, size = order + 1

  Jet() : c{T(0.0)} {}
  Jet(double v) : c{T(v)} {}  // NOLINT: constants convert implicitly
  explicit Jet(std::vector<T> coeffs) : c(std::move(coeffs)) {
    if (c.empty()) c.push_back(T(0.0));
  }

  static Jet variable(const T& at, int order) {
    std::vector<T> v(order + 1, T(0.0));
    v[0] = at;
    if (order >= 1) v[1] = T(1.0);
    return Jet(std::move(v));
  }
  static Jet constant(const T& v) { return Jet(std::vector<T>{v}); }

  std::size_t size() const { return c.size(); }
  int order() const { return int(c.size()) - 1; }
  const T& operator[](std::size_t k) const { return c[k]; }
  /// Coefficient or zero past the stored order.
  T at(std::size_t k) const { return k < c.size() ? c[k] : T(0.0); }

  Jet operator-() const {
    Jet r = *this;
    for (auto& v : r.c) v = -v;
    return r;
  }
  Jet& operator+=(const Jet& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size(), T(0.0));
    for (std::size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size(), T(0.0));
    for (std::size_t k = 0; k < o.c.size(); ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
};

template <class T>
Jet<T> operator+(Jet<T> a, const Jet<T>& b) {
  return a += b;
}
template <class T>
Jet<T> operator-(Jet<T> a, const Jet<T>& b) {
  return a -= b;
}
template <class T>
Jet<T> operator/(Jet<T> a, double s) {
  for (auto& v : a.c) v = v / s;
  return a;
}
template <class T>
Jet<T> operator*(Jet<T> a, double s) {
  return a *= s;
}
template <class T>
Jet<T> operator*(double s, Jet<T> a) {
  return a *= s;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  if (a.size() == 1) return b * a.c[0];
  if (b.size() == 1) return a * b.c[0];
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<T> r(n, T(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < n && j < b.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return Jet<T>(std::move(r));
}

// Jet times inner scalar (used by the nested case).
template <class T>
Jet<T> operator*(Jet<T> a, const T& s)
  requires(!std::is_same_v<T, double>)
{
  for (auto& v : a.c) v = v * s;
  return a;
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<T> q(n, T(0.0));
  const T b0 = b.c[0];
  for (std::size_t k = 0; k < n; ++k) {
    T s = a.at(k);
    for (std::size_t j = 1; j <= k && j < b.size(); ++j) s -= b.c[j] * q[k - j];
    q[k] = s / b0;
  }
  return Jet<T>(std::move(q));
}

namespace jet_detail {

inline double dabs(double v) { return std::abs(v); }

// Shared driver for first-order linear recurrences y' = F(y) a'.
template <class T, class Fn>
std::vector<T> integrate(const Jet<T>& a, T y0, Fn&& dy_coeff) {
  const std::size_t n = a.size();
  std::vector<T> y(n, T(0.0));
  y[0] = y0;
  for (std::size_t k = 1; k < n; ++k) {
    T s(0.0);
    for (std::size_t j = 1; j <= k; ++j) s += a.c[j] * dy_coeff(y, k - j) * double(j);
    y[k] = s / double(k);
  }
  return y;
}

}  // namespace jet_detail

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  return Jet<T>(jet_detail::integrate(a, exp(a.c[0]),
                                      [](const std::vector<T>& y, std::size_t m) { return y[m]; }));
}

template <class T>
Jet<T> log(const Jet<T>& a) {
  using std::log;
  if (!(primal(a) > 0)) throw Error("log of nonpositive value");
  // l' = a'/a
  const std::size_t n = a.size();
  std::vector<T> l(n, T(0.0));
  l[0] = log(a.c[0]);
  for (std::size_t k = 1; k < n; ++k) {
    T s = a.c[k] * double(k);
    for (std::size_t j = 1; j < k; ++j) s -= l[j] * a.c[k - j] * double(j);
    l[k] = s / (a.c[0] * double(k));
  }
  return Jet<T>(std::move(l));
}

template <class T>
void sincos(const Jet<T>& a, Jet<T>& s_out, Jet<T>& c_out, double sign) {
  using std::cos;
  using std::sin;
  const std::size_t n = a.size();
  std::vector<T> s(n, T(0.0)), c(n, T(0.0));
  s[0] = sin(a.c[0]);
  c[0] = cos(a.c[0]);
  if (sign > 0) {
    using std::cosh;
    using std::sinh;
    s[0] = sinh(a.c[0]);
    c[0] = cosh(a.c[0]);
  }
  for (std::size_t k = 1; k < n; ++k) {
    T ss(0.0), cc(0.0);
    for (std::size_t j = 1; j <= k; ++j) {
      ss += a.c[j] * c[k - j] * double(j);
      cc += a.c[j] * s[k - j] * double(j);
    }
    s[k] = ss / double(k);
    c[k] = cc * (sign / double(k));
  }
  s_out = Jet<T>(std::move(s));
  c_out = Jet<T>(std::move(c));
}

template <class T>
Jet<T> sin(const Jet<T>& a) {
  Jet<T> s, c;
  sincos(a, s, c, -1.0);
  return s;
}
template <class T>
Jet<T> cos(const Jet<T>& a) {
  Jet<T> s, c;
  sincos(a, s, c, -1.0);
  return c;
}
template <class T>
Jet<T> sinh(const Jet<T>& a) {
  Jet<T> s, c;
  sincos(a, s, c, 1.0);
  return s;
}
template <class T>
Jet<T> cosh(const Jet<T>& a) {
  Jet<T> s, c;
  sincos(a, s, c, 1.0);
  return c;
}

template <class T>
Jet<T> tanh(const Jet<T>& a) {
  using std::tanh;
  // t' = (1 - t^2) a'
  const std::size_t n = a.size();
  std::vector<T> t(n, T(0.0)), q(n, T(0.0));
  t[0] = tanh(a.c[0]);
  q[0] = T(1.0) - t[0] * t[0];
  for (std::size_t k = 1; k < n; ++k) {
    T s(0.0);
    for (std::size_t j = 1; j <= k; ++j) s += a.c[j] * q[k - j] * double(j);
    t[k] = s / double(k);
    T qq(0.0);
    for (std::size_t i = 0; i <= k; ++i) qq -= t[i] * t[k - i];
    q[k] = qq;
  }
  return Jet<T>(std::move(t));
}

inline double sech(double v) {
  const double w = std::exp(-std::abs(v));
  return 2 * w / (1 + w * w);
}

/// 1/cosh without overflow for large arguments.
template <class T>
Jet<T> sech(const Jet<T>& a) {
  using gfa::sech;
  const Jet<T> t = tanh(a);
  // s' = -s t a'
  const std::size_t n = a.size();
  std::vector<T> s(n, T(0.0)), st(n, T(0.0));
  s[0] = sech(a.c[0]);
  st[0] = s[0] * t.c[0];
  for (std::size_t k = 1; k < n; ++k) {
    T acc(0.0);
    for (std::size_t j = 1; j <= k; ++j) acc += a.c[j] * st[k - j] * double(j);
    s[k] = -(acc / double(k));
    T p(0.0);
    for (std::size_t i = 0; i <= k; ++i) p += s[i] * t.c[k - i];
    st[k] = p;
  }
  return Jet<T>(std::move(s));
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  using std::sqrt;
  if (!(primal(a) > 0)) {
    if (a.size() == 1 && primal(a) == 0) return Jet<T>(std::vector<T>{T(0.0)});
    throw Error("sqrt of nonpositive value");
  }
  const std::size_t n = a.size();
  std::vector<T> r(n, T(0.0));
  r[0] = sqrt(a.c[0]);
  for (std::size_t k = 1; k < n; ++k) {
    T s = a.c[k];
    for (std::size_t j = 1; j < k; ++j) s -= r[j] * r[k - j];
    r[k] = s / (r[0] * 2.0);
  }
  return Jet<T>(std::move(r));
}

template <class T>
Jet<T> pow_int(Jet<T> a, long e) {
  if (e < 0) return Jet<T>(1.0) / pow_int(std::move(a), -e);
  Jet<T> r(1.0);
  while (e > 0) {
    if (e & 1) r = r * a;
    e >>= 1;
    if (e) a = a * a;
  }
  return r;
}

template <class T>
Jet<T> pow(const Jet<T>& a, double p) {
  using std::pow;
  if (p == std::round(p) && std::abs(p) <= 64) return pow_int(a, long(p));
  if (!(primal(a) > 0)) throw Error("non-integer power of nonpositive value");
  const std::size_t n = a.size();
  std::vector<T> y(n, T(0.0));
  y[0] = pow(a.c[0], p);
  for (std::size_t k = 1; k < n; ++k) {
    T s(0.0);
    for (std::size_t j = 1; j <= k; ++j) s += a.c[j] * y[k - j] * (p * double(j) - double(k - j));
    y[k] = s / (a.c[0] * double(k));
  }
  return Jet<T>(std::move(y));
}

template <class T>
Jet<T> abs(const Jet<T>& a) {
  const double p = primal(a);
  if (p == 0 && a.size() > 1) throw Error("abs is not differentiable at 0");
  return p < 0 ? -a : a;
}

inline bool jet_detail_is_scalar_zero(double v) { return v == 0.0; }
template <class T>
bool jet_detail_is_scalar_zero(const Jet<T>& j) {
  for (const auto& v : j.c)
    if (!jet_detail_is_scalar_zero(v)) return false;
  return true;
}

/// sum_k derivs[k]/k! (g - g0)^k, truncated to the order of g.
template <class T>
Jet<T> compose(const std::vector<T>& derivs, const Jet<T>& g) {
  const std::size_t n = g.size();
  std::vector<T> r(n, T(0.0));
  r[0] = derivs[0];
  if (n == 1) return Jet<T>(std::move(r));
  bool linear = true;
  for (std::size_t k = 2; k < n; ++k)
    if (!jet_detail_is_scalar_zero(g.c[k])) linear = false;
  double fact = 1.0;
  if (linear) {
    T p = T(1.0);
    for (std::size_t k = 1; k < n; ++k) {
      fact *= double(k);
      p = p * g.c[1];
      r[k] = derivs[k] * p / fact;
    }
    return Jet<T>(std::move(r));
  }
  std::vector<T> h = g.c;
  h[0] = T(0.0);
  Jet<T> hj(h), p(1.0);
  for (std::size_t k = 1; k < n; ++k) {
    fact *= double(k);
    p = p * hj;
    for (std::size_t m = k; m < p.size(); ++m) r[m] += derivs[k] * p.c[m] / fact;
  }
  return Jet<T>(std::move(r));
}

/// Derivatives 0..n of a scalar function at a (possibly nested) jet argument,
/// given an oracle F(u, m) returning f(u), f'(u), ..., f^{(m)}(u).
template <class F>
std::vector<double> derivatives_at(const F& f, double u, int n) {
  return f(u, n);
}

template <class T, class F>
std::vector<Jet<T>> derivatives_at(const F& f, const Jet<T>& u, int n) {
  const int m = u.order();
  const auto inner = derivatives_at(f, u.c[0], n + m);
  std::vector<Jet<T>> out(n + 1);
  for (int k = 0; k <= n; ++k) {
    std::vector<T> shifted(inner.begin() + k, inner.begin() + k + m + 1);
    out[k] = compose(shifted, u);
  }
  return out;
}

template <class F>
double apply_scalar(const F& f, double u) {
  return f(u, 0)[0];
}

template <class T, class F>
Jet<T> apply_scalar(const F& f, const Jet<T>& g) {
  return compose(derivatives_at(f, g.c[0], g.order()), g);
}

/// k-th derivative recovered from normalized coefficients.
template <class T>
T derivative(const Jet<T>& j, int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return j.at(k) * f;
}

}  // namespace gfa
