#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ahspec/errors.hpp"

namespace ahspec {

// Truncated Taylor expansion about a base point: value plus derivatives up to
// a fixed order, propagated exactly through arithmetic.  Coefficients are
// stored in the monomial basis, c[k] = f^(k)(x0)/k!.  This is what the
// expansion-order certifications and the cutoff-family integrands run on, so
// everything here must be exact arithmetic on coefficients, no differencing.
template <typename Scalar>
class Taylor {
 public:
  using Coeffs = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Taylor() : x0_(0), c_(Coeffs::Zero(1)) {}
  Taylor(Scalar x0, Coeffs c) : x0_(x0), c_(std::move(c)) {
    if (c_.size() == 0) fail(errc::insufficient_data, "empty coefficient vector");
  }

  static Taylor constant(Scalar v, Scalar x0, int order) {
    Coeffs c = Coeffs::Zero(order + 1);
    c[0] = v;
    return Taylor(x0, c);
  }
  static Taylor variable(Scalar x0, int order) {
    Coeffs c = Coeffs::Zero(order + 1);
    c[0] = x0;
    if (order >= 1) c[1] = Scalar(1);
    return Taylor(x0, c);
  }

  int order() const { return int(c_.size()) - 1; }
  Scalar x0() const { return x0_; }
  Scalar value() const { return c_[0]; }
  Scalar coeff(int k) const { return k <= order() ? c_[k] : Scalar(0); }
  Scalar deriv(int k) const {
    Scalar f = 1;
    for (int j = 2; j <= k; ++j) f *= Scalar(j);
    return coeff(k) * f;
  }
  const Coeffs& coeffs() const { return c_; }

  // d/dx, order drops by one.
  Taylor derivative() const {
    int n = order();
    Coeffs d = Coeffs::Zero(std::max(n, 1));
    for (int k = 1; k <= n; ++k) d[k - 1] = Scalar(k) * c_[k];
    return Taylor(x0_, d);
  }

  Taylor truncated(int new_order) const {
    Coeffs d = Coeffs::Zero(new_order + 1);
    d.head(std::min<int>(new_order + 1, c_.size())) = c_.head(std::min<int>(new_order + 1, c_.size()));
    return Taylor(x0_, d);
  }

  Taylor operator-() const { return Taylor(x0_, -c_); }

  friend Taylor operator+(const Taylor& a, const Taylor& b) {
    auto [p, q] = aligned(a, b);
    return Taylor(a.x0_, p + q);
  }
  friend Taylor operator-(const Taylor& a, const Taylor& b) {
    auto [p, q] = aligned(a, b);
    return Taylor(a.x0_, p - q);
  }
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    auto [p, q] = aligned(a, b);
    int n = int(p.size()) - 1;
    Coeffs r = Coeffs::Zero(n + 1);
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= k; ++j) r[k] += p[j] * q[k - j];
    return Taylor(a.x0_, r);
  }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    auto [p, q] = aligned(a, b);
    if (q[0] == Scalar(0)) fail(errc::out_of_range, "Taylor division by series with zero value");
    int n = int(p.size()) - 1;
    Coeffs r = Coeffs::Zero(n + 1);
    for (int k = 0; k <= n; ++k) {
      Scalar s = p[k];
      for (int j = 0; j < k; ++j) s -= r[j] * q[k - j];
      r[k] = s / q[0];
    }
    return Taylor(a.x0_, r);
  }

  friend Taylor operator+(const Taylor& a, Scalar s) { Taylor r = a; r.c_[0] += s; return r; }
  friend Taylor operator+(Scalar s, const Taylor& a) { return a + s; }
  friend Taylor operator-(const Taylor& a, Scalar s) { return a + (-s); }
  friend Taylor operator-(Scalar s, const Taylor& a) { return (-a) + s; }
  friend Taylor operator*(const Taylor& a, Scalar s) { return Taylor(a.x0_, a.c_ * s); }
  friend Taylor operator*(Scalar s, const Taylor& a) { return a * s; }
  friend Taylor operator/(const Taylor& a, Scalar s) { return Taylor(a.x0_, a.c_ / s); }
  friend Taylor operator/(Scalar s, const Taylor& a) {
    return constant(s, a.x0_, a.order()) / a;
  }

  // Analytic recurrences.  g = f^alpha with f(x0) > 0:
  // k g_k f_0 = sum_{j=1..k} ((alpha+1) j - k) f_j g_{k-j}.
  friend Taylor pow(const Taylor& f, Scalar alpha) {
    if (!(f.c_[0] > Scalar(0)))
      fail(errc::out_of_range, "Taylor pow requires positive value at base point");
    int n = f.order();
    Coeffs g = Coeffs::Zero(n + 1);
    g[0] = std::pow(f.c_[0], alpha);
    for (int k = 1; k <= n; ++k) {
      Scalar s = 0;
      for (int j = 1; j <= k; ++j) s += ((alpha + 1) * Scalar(j) - Scalar(k)) * f.c_[j] * g[k - j];
      g[k] = s / (Scalar(k) * f.c_[0]);
    }
    return Taylor(f.x0_, g);
  }

  friend Taylor exp(const Taylor& f) {
    int n = f.order();
    Coeffs g = Coeffs::Zero(n + 1);
    g[0] = std::exp(f.c_[0]);
    for (int k = 1; k <= n; ++k) {
      Scalar s = 0;
      for (int j = 1; j <= k; ++j) s += Scalar(j) * f.c_[j] * g[k - j];
      g[k] = s / Scalar(k);
    }
    return Taylor(f.x0_, g);
  }

  friend Taylor log(const Taylor& f) {
    if (!(f.c_[0] > Scalar(0)))
      fail(errc::out_of_range, "Taylor log requires positive value at base point");
    int n = f.order();
    Coeffs g = Coeffs::Zero(n + 1);
    g[0] = std::log(f.c_[0]);
    for (int k = 1; k <= n; ++k) {
      Scalar s = Scalar(k) * f.c_[k];
      for (int j = 1; j < k; ++j) s -= Scalar(j) * g[j] * f.c_[k - j];
      g[k] = s / (Scalar(k) * f.c_[0]);
    }
    return Taylor(f.x0_, g);
  }

  friend Taylor sqrt(const Taylor& f) { return pow(f, Scalar(0.5)); }

  friend Taylor sinh(const Taylor& f) { return (exp(f) - exp(-f)) / Scalar(2); }
  friend Taylor cosh(const Taylor& f) { return (exp(f) + exp(-f)) / Scalar(2); }

  // outer(inner(x)) where outer is expanded at inner.value().  Plain Horner on
  // the nilpotent part of inner; orders must match.
  friend Taylor compose(const Taylor& outer, const Taylor& inner) {
    int n = inner.order();
    Taylor dx = inner;
    dx.c_[0] = Scalar(0);
    Taylor acc = constant(outer.coeff(std::min(outer.order(), n)), inner.x0_, n);
    for (int k = std::min(outer.order(), n) - 1; k >= 0; --k) acc = acc * dx + outer.coeff(k);
    return acc;
  }

 private:
  static std::pair<Coeffs, Coeffs> aligned(const Taylor& a, const Taylor& b) {
    int n = std::max(a.order(), b.order());
    Coeffs p = Coeffs::Zero(n + 1), q = Coeffs::Zero(n + 1);
    p.head(a.c_.size()) = a.c_;
    q.head(b.c_.size()) = b.c_;
    return {p, q};
  }

  Scalar x0_;
  Coeffs c_;
};

using TaylorXd = Taylor<double>;

}  // namespace ahspec
