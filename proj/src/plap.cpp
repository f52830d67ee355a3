#include "ahspec/plap.hpp"

#include <cmath>
#include <sstream>

#include "ahspec/fitting.hpp"
#include "ahspec/shooting.hpp"

namespace ahspec {

namespace {

void validate(const PlapTask& task) {
  if (!(task.p > 1.0)) fail(errc::out_of_range, "p must lie in (1, inf)");
  if (!(task.R > 0.0)) fail(errc::out_of_range, "R must be positive");
  if (task.metric.n < 0) fail(errc::degenerate_metric, "negative boundary dimension");
  if (task.metric.n == 0 && !std::holds_alternative<SpaceForm>(task.metric.form))
    fail(errc::degenerate_metric, "n=0 is only meaningful for the flat interval surrogate");
}

bool has_zero_before(const RadialMetric& m, double p, double lambda, double R, double ode_tol) {
  return std::isfinite(shoot_first_zero(m, p, lambda, R, ode_tol).first_zero);
}

}  // namespace

EigenResult plap_ball_eigenvalue(const PlapTask& task, double tol) {
  validate(task);
  const double ode_tol = std::min(1e-8, tol);

  // Sturm monotonicity: the solution's first zero moves inward as lambda
  // grows, so "zero before R" brackets lambda_1 from above.
  double lo = 1e-12, hi = 1.0;
  int doublings = 0;
  while (!has_zero_before(task.metric, task.p, hi, task.R, ode_tol)) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 80) fail(errc::no_convergence, "eigenvalue bracket did not close");
  }
  int bisections = 0;
  while ((hi - lo) > 0.1 * tol * hi) {
    double mid = 0.5 * (lo + hi);
    (has_zero_before(task.metric, task.p, mid, task.R, ode_tol) ? hi : lo) = mid;
    if (++bisections > 300) break;
  }
  double lam = 0.5 * (lo + hi);

  auto confirm = shoot_first_zero(task.metric, task.p, lam, 2.0 * task.R + 10.0, ode_tol);
  EigenResult out;
  out.value = lam;
  out.residual = std::isfinite(confirm.first_zero)
                     ? std::abs(confirm.first_zero - task.R) / task.R
                     : (hi - lo) / hi;
  out.mesh_size = 0;
  out.extrapolated = false;
  std::ostringstream diag;
  diag << "bisections=" << bisections << " bracket_doublings=" << doublings
       << " first_zero=" << (std::isfinite(confirm.first_zero) ? confirm.first_zero : -1.0);
  out.diagnostics = diag.str();
  return out;
}

PlapLimit plap_limit(const RadialMetric& m, double p, std::vector<double> R_schedule, double tol) {
  require_ah(m);
  if (R_schedule.size() < 4)
    fail(errc::insufficient_data, "plap_limit needs at least 4 radii");
  PlapLimit out;
  for (double R : R_schedule) {
    PlapTask task{m, R, p};
    out.lambdas.push_back(plap_ball_eigenvalue(task, tol).value);
  }
  LimitFit fit = exp_limit_fit(R_schedule, out.lambdas);
  out.limit = fit.limit;
  out.fit_quality = fit.fit_quality;
  return out;
}

double cheng_upper_bound(double min_dr, int n, double p) {
  if (!(min_dr > 0)) fail(errc::out_of_range, "min_dr must be positive");
  if (!(p > 1.0)) fail(errc::out_of_range, "p must exceed 1");
  return std::pow(min_dr * n / p, p);
}

double scaling_check(double kappa, int n, double p, double R, double tol) {
  if (!(kappa > 0)) fail(errc::out_of_range, "kappa must be positive");
  RadialMetric scaled{n, SpaceForm{kappa}, true, ""};
  RadialMetric unit{n, SpaceForm{1.0}, true, ""};
  double lhs = plap_ball_eigenvalue({scaled, R, p}, tol).value;
  double rhs = std::pow(kappa, p) * plap_ball_eigenvalue({unit, kappa * R, p}, tol).value;
  return std::abs(lhs - rhs) / lhs;
}

}  // namespace ahspec
