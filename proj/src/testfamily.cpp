#include "ahspec/testfamily.hpp"

#include <algorithm>
#include <cmath>

#include "ahspec/quadrature.hpp"
#include "ahspec/taylor.hpp"

namespace ahspec {

namespace {

void validate_family(const RadialMetric& m, const CutoffParams& p) {
  if (!m.is_normal_form())
    fail(errc::wrong_variant, "cutoff quotients live in the normal-form gauge");
  int n = m.n;
  if (!(p.s > 0.5 * (n - 1) && p.s < 0.5 * n))
    fail(errc::config_error,
         "s=" + num_str(p.s) + " outside ((n-1)/2, n/2) for n=" + std::to_string(n));
  if (!(p.eps > 0 && p.eps < p.eps_r && p.eps_r < p.A))
    fail(errc::config_error, "need 0 < eps < eps_r < A");
  if (p.delta < 0) fail(errc::config_error, "delta must be >= 0");
  if (p.amplitude <= 0) fail(errc::config_error, "amplitude must be positive");
  double r_center = std::get<NormalForm>(m.form).r_center;
  if (!(p.A < r_center)) fail(errc::out_of_range, "outer radius A reaches the center chart");
  if (p.outer_profile.empty()) fail(errc::config_error, "outer profile has no coefficients");
}

// f = r^s * polyval(g, r) on [lo, hi]; the pieces tile the cutoff support.
struct Piece {
  double lo, hi;
  std::vector<double> g;
};

// profile(y) with y = alpha + beta r, expanded in r.
std::vector<double> compose_linear(const std::vector<double>& q, double alpha, double beta) {
  std::vector<double> out{q.back()};
  for (int j = int(q.size()) - 2; j >= 0; --j) {
    std::vector<double> nxt(out.size() + 1, 0.0);
    for (size_t i = 0; i < out.size(); ++i) {
      nxt[i] += out[i] * alpha;
      nxt[i + 1] += out[i] * beta;
    }
    nxt[0] += q[j];
    out = std::move(nxt);
  }
  return out;
}

std::vector<Piece> pieces(const CutoffParams& p) {
  double r0 = p.eps * p.delta / (1.0 + p.delta);
  double c1 = (1.0 + p.delta) / p.eps;
  std::vector<Piece> ps;
  ps.push_back({r0, p.eps, {-c1 * r0, c1}});
  ps.push_back({p.eps, p.eps_r, {1.0}});
  double h = p.A - p.eps_r;
  ps.push_back({p.eps_r, p.A, compose_linear(p.outer_profile, -p.eps_r / h, 1.0 / h)});
  for (auto& pc : ps)
    for (double& c : pc.g) c *= p.amplitude;
  return ps;
}

TaylorXd piece_jet(const Piece& pc, double s, double r, int order) {
  TaylorXd rj = TaylorXd::variable(r, order);
  TaylorXd g = TaylorXd::constant(pc.g.back(), r, order);
  for (int j = int(pc.g.size()) - 2; j >= 0; --j) g = g * rj + pc.g[j];
  return pow(rj, s) * g;
}

enum class Form { mass, grad, lap, gradlap };

// One quadrature sample of the quotient forms.  The Laplacian recursion runs
// on jets of order l, which keeps the final value exact: each application
// spends two orders of trusted coefficients and the sample only reads order
// zero (one, before the last derivative, for the odd forms).
double form_value(const RadialMetric& m, double s, const Piece& pc, Form form, int l, double r) {
  int mhalf = l / 2;
  TaylorXd u = piece_jet(pc, s, r, l);
  if (mhalf > 0) {
    TaylorXd a, b;
    radial_laplacian_jets(m, r, l, a, b);
    for (int i = 0; i < mhalf; ++i)
      u = a * u.derivative().derivative() + b * u.derivative();
  }
  Density d = density(m, r);
  double w = std::pow(r, -double(m.n) - 1.0) * d.D;
  switch (form) {
    case Form::mass: {
      double v = u.value();
      return v * v * w;
    }
    case Form::grad:
    case Form::gradlap: {
      double v = u.derivative().value();
      return r * r * v * v * w;
    }
    case Form::lap: {
      double v = u.value();
      return v * v * w;
    }
  }
  return 0;
}

double integrate_form(const RadialMetric& m, const CutoffParams& p, Form form, int l,
                      double vol_hat) {
  // mass/grad need f itself (l such that no Laplacian is applied).
  int ord = (form == Form::mass) ? 0 : (form == Form::grad) ? 1 : l;
  double sigma = 2.0 * p.s - m.n;
  double total = 0;
  for (const Piece& pc : pieces(p)) {
    auto f = [&](double r) { return form_value(m, p.s, pc, form, ord, r); };
    std::optional<EndpointPower> left;
    if (pc.lo == 0.0) left = EndpointPower{sigma + 1.0};
    total += quad_adaptive(f, pc.lo, pc.hi, 1e-11, left).value;
  }
  return vol_hat * total;
}

std::vector<double> default_eps_schedule() {
  std::vector<double> s;
  for (int k = 0; k < 5; ++k) s.push_back(1e-3 * std::pow(10.0, -0.5 * k));
  return s;
}

double variant_divisor(double sigma, FormulaVariant v) {
  return v == FormulaVariant::paper ? sigma + 1.0 : sigma + 2.0;
}

}  // namespace

double cutoff_eval(const CutoffParams& p, double r) {
  if (r < 0) fail(errc::out_of_range, "cutoff argument r must be >= 0");
  double r0 = p.eps * p.delta / (1.0 + p.delta);
  if (r <= r0) return 0.0;
  if (r < p.eps) return p.amplitude * (1.0 + p.delta) / p.eps * (r - r0);
  if (r <= p.eps_r) return p.amplitude;
  if (r >= p.A) return 0.0;
  double y = (r - p.eps_r) / (p.A - p.eps_r);
  double v = p.outer_profile.back();
  for (int j = int(p.outer_profile.size()) - 2; j >= 0; --j) v = v * y + p.outer_profile[j];
  return p.amplitude * v;
}

double rayleigh_clamped_numeric(const RadialMetric& m, const CutoffParams& p, int l) {
  validate_family(m, p);
  if (l < 1) fail(errc::config_error, "operator order l must be >= 1");
  Form num_form = (l == 1) ? Form::grad : (l % 2 == 0 ? Form::lap : Form::gradlap);
  double num = integrate_form(m, p, num_form, l, 1.0);
  double den = integrate_form(m, p, Form::mass, 0, 1.0);
  return num / den;
}

double rayleigh_buckling_numeric(const RadialMetric& m, const CutoffParams& p) {
  validate_family(m, p);
  double num = integrate_form(m, p, Form::lap, 2, 1.0);
  double den = integrate_form(m, p, Form::grad, 1, 1.0);
  return num / den;
}

double clamped_limit_formula(double s, int n, int l, FormulaVariant v) {
  double sigma = 2.0 * s - n;
  int mhalf = l / 2;
  double N;
  if (l % 2 == 0) {
    double X = std::pow(s + 1.0, 2 * mhalf) * std::pow(s + 1.0 - n, 2 * mhalf);
    double Y = std::pow(s, 2 * mhalf) * std::pow(s - n, 2 * mhalf);
    N = X / variant_divisor(sigma, v) - Y / sigma;
  } else {
    double X = std::pow(s + 1.0, 2 * mhalf + 2) * std::pow(s + 1.0 - n, 2 * mhalf);
    double Y = std::pow(s, 2 * mhalf + 2) * std::pow(s - n, 2 * mhalf);
    N = X / (sigma + 2.0) - Y / sigma;
  }
  double D = 1.0 / (sigma + 2.0) - 1.0 / sigma;
  return N / D;
}

double buckling_limit_formula(double s, int n, FormulaVariant v) {
  double sigma = 2.0 * s - n;
  double X = std::pow(s + 1.0, 2) * std::pow(s + 1.0 - n, 2);
  double Y = s * s * (s - n) * (s - n);
  double N = X / variant_divisor(sigma, v) - Y / sigma;
  double D = (s + 1.0) * (s + 1.0) / (sigma + 2.0) - s * s / sigma;
  return N / D;
}

OrderEstimate denominator_coefficient_check(const RadialMetric& m, double s,
                                            const std::vector<double>& eps_schedule) {
  CutoffParams p;
  p.s = s;
  p.delta = 0.0;
  double sigma = 2.0 * s - m.n;
  double vol = boundary_data(m).vol_hat;
  std::vector<double> eps(eps_schedule), I;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (double e : eps) {
    p.eps = e;
    validate_family(m, p);
    I.push_back(integrate_form(m, p, Form::mass, 0, vol));
  }
  PowerCoeffFit fit = power_coeff_fit(eps, I, sigma);
  std::vector<double> rem(I.size());
  for (size_t i = 0; i < I.size(); ++i) rem[i] = std::abs(I[i] - fit.c0);
  OrderEstimate est = order_fit(eps, rem);
  est.intercept = fit.c1;
  est.residual_rms = fit.residual_rms;
  return est;
}

QuotientLimitEstimate quotient_limit_estimate(const RadialMetric& m, double s, int l,
                                              std::vector<double> eps_schedule, double delta) {
  if (eps_schedule.empty()) eps_schedule = default_eps_schedule();
  if (eps_schedule.size() < 3)
    fail(errc::insufficient_data, "coefficient fit needs at least 3 eps values");
  CutoffParams p;
  p.s = s;
  p.delta = delta;
  double sigma = 2.0 * s - m.n;
  Form num_form = (l == 0) ? Form::lap : (l == 1) ? Form::grad
                                                  : (l % 2 == 0 ? Form::lap : Form::gradlap);
  Form den_form = (l == 0) ? Form::grad : Form::mass;
  int num_ord = (l == 0) ? 2 : l;
  std::vector<double> eps(eps_schedule), N, D;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (double e : eps) {
    p.eps = e;
    validate_family(m, p);
    N.push_back(integrate_form(m, p, num_form, num_ord, 1.0));
    D.push_back(integrate_form(m, p, den_form, 1, 1.0));
  }
  PowerCoeffFit fn = power_coeff_fit(eps, N, sigma);
  PowerCoeffFit fd = power_coeff_fit(eps, D, sigma);
  QuotientLimitEstimate out;
  out.c1_num = fn.c1;
  out.c1_den = fd.c1;
  out.num_residual = fn.residual_rms;
  out.den_residual = fd.residual_rms;
  if (!(std::abs(fd.c1) > 0))
    fail(errc::fit_failure, "denominator divergent coefficient vanished");
  out.limit = fn.c1 / fd.c1;
  return out;
}

}  // namespace ahspec
