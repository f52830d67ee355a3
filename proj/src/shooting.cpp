#include "ahspec/shooting.hpp"

#include <cmath>
#include <limits>

#include "ahspec/ode.hpp"

namespace ahspec {

namespace {

// The ODE is started off the coordinate singularity with the exact leading
// behaviour at the center: with q = p/(p-1),
//   f(t) = 1 - c t^q + O(t^{q+2}),  c = (lambda/(n+1))^{1/(p-1)} / q,
//   w(t) = -lambda t / (n+1) + O(t^3),
// valid for any warp with phi ~ t (so b ~ n/t).
constexpr double kStart = 1e-6;

struct Series {
  double f0, w0;
};

Series series_start(int n, double p, double lambda, double t0) {
  double q = p / (p - 1.0);
  double c = std::pow(lambda / (n + 1.0), 1.0 / (p - 1.0)) / q;
  return {1.0 - c * std::pow(t0, q), -lambda * t0 / (n + 1.0)};
}

}  // namespace

ShootResult shoot_first_zero(const std::function<double(double)>& b_coeff, int n, double p,
                             double lambda, double max_t, double ode_tol, double root_tol) {
  if (!(p > 1.0)) fail(errc::out_of_range, "p must exceed 1");
  if (!(lambda > 0.0)) fail(errc::out_of_range, "shooting requires lambda > 0");
  if (!(max_t > kStart)) fail(errc::out_of_range, "max_t too small");

  const double pe = 1.0 / (p - 1.0);
  OdeStepper<2>::Rhs rhs = [&b_coeff, p, pe, lambda](double t, const Eigen::Vector2d& y,
                                                     Eigen::Vector2d& dy) {
    double f = y[0], w = y[1];
    double fp = (w == 0.0) ? 0.0 : std::copysign(std::pow(std::abs(w), pe), w);
    dy[0] = fp;
    dy[1] = -b_coeff(t) * w - lambda * std::copysign(std::pow(std::abs(f), p - 1.0), f);
  };
  OdeStepper<2> stepper(rhs, ode_tol, ode_tol * 1e-6);

  // The flux system is (p-1)-homogeneous: (f, w) -> (sf, s^{p-1} w) maps
  // solutions to solutions and preserves zeros.  On long intervals below
  // threshold the solution decays like e^{-nt/2}; renormalizing whenever the
  // amplitude drops keeps the zero detection at O(1) scale all the way out.
  Series s = series_start(n, p, lambda, kStart);
  Eigen::Vector2d y(s.f0, s.w0);
  double t = kStart;
  double scale_accum = 1.0;
  auto amplitude = [pe](const Eigen::Vector2d& v) {
    return std::max(std::abs(v[0]), std::pow(std::abs(v[1]), pe));
  };
  auto need_stop = [&](double, const Eigen::Vector2d& v) {
    return v[0] <= 0.0 || amplitude(v) < 1e-3;
  };
  OdeStepper<2>::StepOut out{t, y, false, t, y};
  for (int seg = 0; seg < 4000; ++seg) {
    out = stepper.integrate(t, y, max_t, need_stop);
    if (!out.stopped || out.y[0] <= 0.0) break;
    t = out.t;
    y = out.y;
    double amp = amplitude(y);
    if (amp <= 0.0) break;  // identically collapsed; treat as no zero
    scale_accum *= amp;
    y[0] /= amp;
    y[1] /= std::pow(amp, p - 1.0);
  }
  if (!out.stopped || out.y[0] > 0.0) {
    ShootResult r;
    r.first_zero = std::numeric_limits<double>::infinity();
    r.f_end = out.y[0] * scale_accum;
    return r;
  }

  // Refine the crossing inside [t_before, t] by bisection on the step length,
  // re-integrating the short substep each time; f is monotone there since
  // w < 0 strictly before the first zero.
  double lo = out.t_before, hi = out.t;
  Eigen::Vector2d ylo = out.y_before;
  for (int it = 0; it < 200 && (hi - lo) > root_tol * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    auto sub = stepper.integrate(lo, ylo, mid);
    if (sub.y[0] <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      ylo = sub.y;
    }
  }
  ShootResult r;
  r.first_zero = 0.5 * (lo + hi);
  r.f_end = 0.0;
  return r;
}

ShootResult shoot_first_zero(const RadialMetric& m, double p, double lambda, double max_t,
                             double ode_tol, double root_tol) {
  Curve phi = geodesic_warp(m);
  int n = m.n;
  auto b = [phi, n](double t) {
    double v = phi(t);
    if (!(v > 0)) fail(errc::degenerate_metric, "phi(t) <= 0 inside shooting range");
    return n * phi.deriv(t, 1) / v;
  };
  return shoot_first_zero(b, n, p, lambda, max_t, ode_tol, root_tol);
}

}  // namespace ahspec
