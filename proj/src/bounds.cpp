#include "ahspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ahspec/quadrature.hpp"

namespace ahspec {
namespace {

// Degree-9 smoothstep: S(0)=0, S(1)=1, S^(j) = 0 at both ends for j = 1..4.
TaylorXd smoothstep9(const TaylorXd& x) {
  static const double c[5] = {126.0, -420.0, 540.0, -315.0, 70.0};
  TaylorXd acc = TaylorXd::constant(c[4], x.x0(), x.order());
  for (int k = 3; k >= 0; --k) acc = acc * x + c[k];
  return acc * x * x * x * x * x;
}

Curve window_curve(double t0, double t1, double w) {
  return Curve([t0, t1, w](double t, int order) {
    if (t <= t0 || t >= t1) return TaylorXd::constant(0.0, t, order);
    TaylorXd tt = TaylorXd::variable(t, order);
    if (t < t0 + w) return smoothstep9((tt - t0) / w);
    if (t > t1 - w) return smoothstep9((TaylorXd::constant(t1, t, order) - tt) / w);
    return TaylorXd::constant(1.0, t, order);
  });
}

void validate_support(const RadialTestFunction& f) {
  if (!f.f.valid()) fail(errc::config_error, "test function has no profile");
  if (!(f.t_lo > 0.0) || !(f.t_hi > f.t_lo))
    fail(errc::config_error, "test function support must satisfy 0 < t_lo < t_hi");
}

// All the inequality ops run in the geodesic ball gauge; normal-form inputs
// are rewritten through their warp so one quadrature path serves both.
RadialMetric geodesic_gauge(const RadialMetric& m) {
  require_ah(m);
  if (!m.is_normal_form()) return m;
  RadialMetric geo = m;
  geo.form = Warped{geodesic_warp(m)};
  return geo;
}

void require_lee_hypotheses(const RadialMetric& m) {
  if (!m.yamabe_nonneg)
    fail(errc::hypothesis_violation,
         "nonnegative boundary Yamabe class is required for the sharp lower bounds");
}

void scan_nonnegative(const RadialTestFunction& f, const char* who) {
  const int N = 512;
  double lo = 0.0, scale = 0.0;
  for (int i = 0; i <= N; ++i) {
    double t = f.t_lo + (f.t_hi - f.t_lo) * double(i) / N;
    double v = f.f(t);
    lo = std::min(lo, v);
    scale = std::max(scale, std::abs(v));
  }
  if (lo < -1e-12 * std::max(scale, 1.0))
    fail(errc::hypothesis_violation,
         std::string(who) + ": test function takes negative values (min " + num_str(lo) + ")");
}

double weighted_integral(const RadialTestFunction& f, const Curve& phi, int n,
                         const std::function<double(double)>& node_value) {
  auto integrand = [&](double t) {
    return node_value(t) * std::pow(phi(t), double(n));
  };
  return quad_adaptive(integrand, f.t_lo, f.t_hi, 1e-11).value;
}

}  // namespace

double w_curve(double b, double p, double eps) {
  if (!(b > 0.0)) fail(errc::config_error, "w_curve needs b > 0");
  if (!(p > 1.0)) fail(errc::config_error, "w_curve needs p > 1");
  if (!(eps > 0.0)) fail(errc::config_error, "w_curve needs eps > 0");
  return (b + (1.0 - p) * std::pow(eps, p / (p - 1.0))) * std::pow(eps, p);
}

WMax w_max(double b, double p) {
  if (!(b > 0.0)) fail(errc::config_error, "w_max needs b > 0");
  if (!(p > 1.0)) fail(errc::config_error, "w_max needs p > 1");
  WMax out;
  out.eps_m = std::pow(b / p, 1.0 - 1.0 / p);
  out.value = w_curve(b, p, out.eps_m);
  return out;
}

RadialTestFunction smooth_window(double t0, double t1, double w) {
  if (!(t0 > 0.0) || !(t1 > t0) || !(w > 0.0) || !(2.0 * w <= t1 - t0))
    fail(errc::config_error, "window needs 0 < t0 < t1 and 0 < 2w <= t1 - t0");
  return {window_curve(t0, t1, w), t0, t1};
}

RadialTestFunction random_bump(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double center = 1.5 + 2.5 * U(rng);
  double half = 0.4 + 0.6 * U(rng);
  double t0 = center - half, t1 = center + half;
  double w = 0.35 * (t1 - t0);
  double q0 = 2.0 * U(rng) - 1.0, q1 = 2.0 * U(rng) - 1.0, q2 = 2.0 * U(rng) - 1.0;
  Curve win = window_curve(t0, t1, w);
  Curve f([win, center, q0, q1, q2](double t, int order) {
    TaylorXd dt = TaylorXd::variable(t, order) - center;
    TaylorXd q = (q2 * dt + q1) * dt + q0;
    return win.jet(t, order) * (q * q + 0.05);
  });
  return {f, t0, t1};
}

RadialTestFunction decaying_window(double s, double t0, double t1, double w) {
  RadialTestFunction win = smooth_window(t0, t1, w);
  Curve base = win.f;
  Curve f([base, s](double t, int order) {
    return base.jet(t, order) * exp(TaylorXd::variable(t, order) * (-s));
  });
  return {f, win.t_lo, win.t_hi};
}

double poincare_check(const RadialMetric& m, const RadialTestFunction& f, double p) {
  if (!(p > 1.0)) fail(errc::config_error, "poincare_check needs p > 1");
  validate_support(f);
  require_lee_hypotheses(m);
  RadialMetric geo = geodesic_gauge(m);
  scan_nonnegative(f, "poincare_check");
  Curve phi = geodesic_warp(geo);
  double num = weighted_integral(f, phi, geo.n, [&](double t) {
    return std::pow(std::abs(f.f.jet(t, 1).deriv(1)), p);
  });
  double den = weighted_integral(f, phi, geo.n, [&](double t) {
    return std::pow(f.f(t), p);
  });
  if (!(den > 0.0)) fail(errc::degenerate_metric, "test function has zero mass");
  return num / den;
}

IteratedMargins iterated_inequality_check(const RadialMetric& m, const RadialTestFunction& f,
                                          double p, int m_iter, double b) {
  if (!(p > 1.0)) fail(errc::config_error, "iterated_inequality_check needs p > 1");
  if (m_iter < 1) fail(errc::config_error, "iterated_inequality_check needs m >= 1");
  if (!(b > 0.0)) fail(errc::config_error, "iterated_inequality_check needs b > 0");
  validate_support(f);
  require_lee_hypotheses(m);
  RadialMetric geo = geodesic_gauge(m);
  if (b > double(geo.n) + 1e-12)
    fail(errc::hypothesis_violation,
         "drift constant b = " + num_str(b) + " exceeds the certified Delta(ln u) >= n = " +
             num_str(double(geo.n)));
  Curve phi = geodesic_warp(geo);

  const int ord = 2 * m_iter + 1;
  auto iterated = [&](double t) {
    TaylorXd a, bb;
    radial_laplacian_jets(geo, t, ord, a, bb);
    TaylorXd u = f.f.jet(t, ord);
    for (int i = 0; i < m_iter; ++i) u = a * u.derivative().derivative() + bb * u.derivative();
    return u;
  };

  IteratedMargins out;
  out.mass = weighted_integral(f, phi, geo.n,
                               [&](double t) { return std::pow(std::abs(f.f(t)), p); });
  out.laplacian = weighted_integral(
      f, phi, geo.n, [&](double t) { return std::pow(std::abs(iterated(t).value()), p); });
  out.gradient = weighted_integral(f, phi, geo.n, [&](double t) {
    return std::pow(std::abs(iterated(t).derivative().value()), p);
  });
  if (!(out.mass > 0.0)) fail(errc::degenerate_metric, "test function has zero mass");

  out.lap_constant = std::pow((p - 1.0) * b * b / (p * p), p * double(m_iter));
  out.grad_constant = std::pow(b / p, p) * out.lap_constant;
  out.lap_margin = out.laplacian / (out.lap_constant * out.mass) - 1.0;
  out.grad_margin = out.gradient / (out.grad_constant * out.mass) - 1.0;
  return out;
}

DivergenceCheck divergence_identity_check(const RadialMetric& m, const RadialTestFunction& f,
                                          double p, double t_ball) {
  if (!(p > 1.0)) fail(errc::config_error, "divergence_identity_check needs p > 1");
  if (!(t_ball > 0.0)) fail(errc::config_error, "divergence_identity_check needs t_ball > 0");
  if (!f.f.valid()) fail(errc::config_error, "test function has no profile");
  RadialMetric geo = geodesic_gauge(m);
  Curve phi = geodesic_warp(geo);
  const int n = geo.n;

  {
    RadialTestFunction probe{f.f, t_ball * 1e-3, t_ball};
    scan_nonnegative(probe, "divergence_identity_check");
  }

  // div(f^p grad ln u) against dv, radial part only: with F = f^p u_t/u,
  // the density is (F' + n (phi'/phi) F) phi^n.
  auto integrand = [&](double t) {
    TaylorXd fj = f.f.jet(t, 1);
    double fv = fj.value(), fd = fj.deriv(1);
    TaylorXd uj = cosh(TaylorXd::variable(t, 2));
    TaylorXd g = uj.derivative() / uj;
    double g0 = g.value(), g1 = g.derivative().value();
    TaylorXd ph = phi.jet(t, 1);
    double F = std::pow(fv, p) * g0;
    double dF = p * std::pow(fv, p - 1.0) * fd * g0 + std::pow(fv, p) * g1;
    return (dF + double(n) * (ph.deriv(1) / ph.value()) * F) * std::pow(ph.value(), double(n));
  };

  DivergenceCheck out;
  out.volume_integral =
      quad_adaptive(integrand, 0.0, t_ball, 1e-11, EndpointPower{double(n)}).value;
  out.boundary_flux = std::pow(f.f(t_ball), p) * std::tanh(t_ball) *
                      std::pow(phi(t_ball), double(n));
  return out;
}

EquidistantFrame equidistant_frame(double d, double rho) {
  if (!(d >= 0.0) || !(rho >= 0.0)) fail(errc::config_error, "frame needs d >= 0 and rho >= 0");
  if (rho == 0.0) return {d, d > 0.0 ? 1.0 : 0.0};
  if (d == 0.0) return {rho, 0.0};
  double t = std::acosh(std::cosh(d) * std::cosh(rho));
  double c = std::tanh(d) / std::tanh(t);
  return {t, c * c};
}

double submanifold_beta(const ModelSubmanifold& sub, const LeeSolution& sol) {
  const RadialMetric& amb = sub.ambient;
  if (!amb.is_normal_form())
    fail(errc::wrong_variant, "submanifold ambient must be a normal-form metric");
  require_ah(amb);
  const int n = amb.n;
  if (sol.grid.empty() || sol.grid.size() != sol.u.size() || sol.grid.size() != sol.du.size())
    fail(errc::insufficient_data, "lee solution grid is empty or inconsistent");

  if (sub.kind == ModelSubmanifold::Kind::totally_geodesic) {
    if (sub.distance != 0.0)
      fail(errc::config_error, "totally geodesic models carry no distance parameter");
    if (sub.k < 1 || sub.k > n - 1)
      fail(errc::not_in_catalog,
           "totally geodesic Y^(k+1) in X^(n+1) needs 1 <= k <= n-1, got k = " + num_str(sub.k));
  } else {
    if (sub.k != n - 1)
      fail(errc::not_in_catalog, "equidistant models are hypersurfaces: k must equal n-1");
    if (!(sub.distance >= 0.0)) fail(errc::config_error, "equidistant offset must be >= 0");
  }

  Curve phi = geodesic_warp(amb);
  size_t N = sol.grid.size();
  std::vector<double> ts(N), us(N), Bs(N), scales(N);
  for (size_t i = 0; i < N; ++i) {
    double r = sol.grid[i];
    ts[i] = normal_form_t_of_r(amb, r);
    us[i] = sol.u[i];
    double ut = -r * sol.du[i];
    TaylorXd ph = phi.jet(ts[i], 1);
    double lp = ph.deriv(1) / ph.value();
    Bs[i] = ut * lp - us[i];
    scales[i] = std::abs(ut * lp) + std::abs(us[i]);
  }

  for (size_t i = 0; i < N; ++i) {
    if (ts[i] < 0.01) continue;
    if (std::abs(Bs[i]) > 1e-9 * scales[i])
      fail(errc::hypothesis_violation,
           "tangential Hessian identity u_t phi'/phi = u fails at r = " + num_str(sol.grid[i]) +
               " (residual " + num_str(Bs[i] / us[i]) + ")");
  }

  double d = sub.distance;
  if (sub.kind == ModelSubmanifold::Kind::totally_geodesic || d == 0.0) return 0.0;

  double td2 = std::tanh(d) * std::tanh(d);
  double sup = -std::numeric_limits<double>::infinity();
  int used = 0;
  for (size_t i = 0; i < N; ++i) {
    if (ts[i] < std::max(d, 0.01)) continue;
    double th = std::tanh(ts[i]);
    double cos2 = td2 / (th * th);
    sup = std::max(sup, Bs[i] * (1.0 - double(n + 1) * cos2) / us[i]);
    ++used;
  }
  if (used < 8)
    fail(errc::out_of_range,
         "offset d = " + num_str(d) + " leaves too little of the certified grid window");
  return sup;
}

SubmanifoldBounds submanifold_lower_bounds(int k, double alpha, double beta, double p, int l) {
  if (k < 1) fail(errc::config_error, "submanifold bounds need k >= 1");
  if (!(alpha >= 0.0)) fail(errc::config_error, "mean curvature bound alpha must be >= 0");
  if (!(p > 1.0)) fail(errc::config_error, "submanifold bounds need p > 1");
  if (l < 1) fail(errc::config_error, "submanifold bounds need l >= 1");
  if (!std::isfinite(beta)) fail(errc::config_error, "beta must be finite");
  double gap = double(k) - alpha - beta;
  if (!(gap > 0.0))
    fail(errc::hypothesis_violation,
         "alpha + beta = " + num_str(alpha + beta) + " must stay below k = " + num_str(k));
  SubmanifoldBounds out;
  out.plap = std::pow(gap / p, p);
  out.clamped = std::pow(gap / 2.0, 2.0 * l);
  out.buckling = std::pow(gap / 2.0, 2.0);
  return out;
}

}  // namespace ahspec
