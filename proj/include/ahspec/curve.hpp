#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "ahspec/errors.hpp"
#include "ahspec/taylor.hpp"

namespace ahspec {

// A scalar profile on an interval that can be queried for a Taylor jet of any
// order at any interior point.  Warping functions, conformal factors and
// spline-sampled user profiles all flow through this one type so downstream
// code never needs to know how a profile was specified.
class Curve {
 public:
  using JetFn = std::function<TaylorXd(double x, int order)>;

  Curve() = default;
  explicit Curve(JetFn jet) : jet_(std::move(jet)) {}

  bool valid() const { return bool(jet_); }
  TaylorXd jet(double x, int order) const { return jet_(x, order); }
  double operator()(double x) const { return jet_(x, 0).value(); }
  double deriv(double x, int k) const { return jet_(x, k).deriv(k); }

  // Dense polynomial, coefficients ascending in x.
  static Curve polynomial(Eigen::VectorXd coeffs) {
    return Curve([coeffs](double x, int order) {
      TaylorXd t = TaylorXd::variable(x, order);
      TaylorXd acc = TaylorXd::constant(coeffs[coeffs.size() - 1], x, order);
      for (int k = int(coeffs.size()) - 2; k >= 0; --k) acc = acc * t + coeffs[k];
      return acc;
    });
  }

  // sinh(kappa t)/kappa, with the kappa -> 0 limit t handled exactly.
  static Curve sinh_scaled(double kappa) {
    if (kappa == 0.0) {
      Eigen::VectorXd c(2);
      c << 0.0, 1.0;
      return polynomial(c);
    }
    return Curve([kappa](double x, int order) {
      return sinh(TaylorXd::variable(x, order) * kappa) / kappa;
    });
  }

  // sinh t + eps t^3: sinh-like near 0, used to exercise non-space-form warps.
  static Curve sinh_plus_cubic(double eps) {
    return Curve([eps](double x, int order) {
      TaylorXd t = TaylorXd::variable(x, order);
      return sinh(t) + eps * t * t * t;
    });
  }

  // Natural cubic spline through (xs, ys); jets come from the piecewise cubic
  // so derivatives above 3 vanish identically.
  static Curve cubic_spline(const std::vector<double>& xs, const std::vector<double>& ys);

  friend Curve operator*(const Curve& a, double s) {
    auto j = a.jet_;
    return Curve([j, s](double x, int order) { return j(x, order) * s; });
  }

 private:
  JetFn jet_;
};

inline Curve Curve::cubic_spline(const std::vector<double>& xs, const std::vector<double>& ys) {
  int n = int(xs.size());
  if (n < 3) fail(errc::insufficient_data, "cubic spline needs at least 3 knots");
  if (xs.size() != ys.size()) fail(errc::config_error, "spline knot count mismatch");
  for (int i = 0; i + 1 < n; ++i)
    if (!(xs[i] < xs[i + 1])) fail(errc::config_error, "spline knots must be strictly increasing");

  // Second derivatives at knots, natural end conditions, via the standard
  // tridiagonal solve.
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  if (n > 2) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n - 2, n - 2);
    Eigen::VectorXd rhs(n - 2);
    for (int i = 1; i < n - 1; ++i) {
      double h0 = xs[i] - xs[i - 1], h1 = xs[i + 1] - xs[i];
      int r = i - 1;
      if (r > 0) A(r, r - 1) = h0 / 6.0;
      A(r, r) = (h0 + h1) / 3.0;
      if (r < n - 3) A(r, r + 1) = h1 / 6.0;
      rhs[r] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
    }
    m.segment(1, n - 2) = A.fullPivLu().solve(rhs);
  }

  auto knots = std::make_shared<std::vector<double>>(xs);
  auto vals = std::make_shared<std::vector<double>>(ys);
  auto mom = std::make_shared<Eigen::VectorXd>(m);
  return Curve([knots, vals, mom](double x, int order) {
    const auto& X = *knots;
    const auto& Y = *vals;
    int n = int(X.size());
    if (x < X.front() - 1e-12 || x > X.back() + 1e-12)
      fail(errc::out_of_range, "spline evaluated outside knot range");
    int i = int(std::upper_bound(X.begin(), X.end(), x) - X.begin()) - 1;
    i = std::clamp(i, 0, n - 2);
    double h = X[i + 1] - X[i];
    double m0 = (*mom)[i], m1 = (*mom)[i + 1];
    // Cubic on [X_i, X_{i+1}] written in ascending powers of (x - X_i).
    double a0 = Y[i];
    double a1 = (Y[i + 1] - Y[i]) / h - h * (2 * m0 + m1) / 6.0;
    double a2 = m0 / 2.0;
    double a3 = (m1 - m0) / (6.0 * h);
    TaylorXd dx = TaylorXd::variable(x, order) - X[i];
    return ((a3 * dx + a2) * dx + a1) * dx + a0;
  });
}

}  // namespace ahspec
