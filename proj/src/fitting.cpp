#include "ahspec/fitting.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

namespace ahspec {

OrderEstimate order_fit(const std::vector<double>& x, const std::vector<double>& remainder,
                        double noise_floor) {
  if (x.size() != remainder.size()) fail(errc::config_error, "order_fit size mismatch");
  if (x.size() < 8)
    fail(errc::insufficient_data,
         "order_fit needs at least 8 samples, got " + std::to_string(x.size()));
  std::vector<double> lx, ly;
  double xlo = std::numeric_limits<double>::infinity(), xhi = 0;
  bool any_nonzero = false;
  for (size_t i = 0; i < x.size(); ++i) {
    double r = std::abs(remainder[i]);
    if (r != 0) any_nonzero = true;
    if (r <= noise_floor) continue;
    if (!(x[i] > 0)) fail(errc::out_of_range, "order_fit needs positive abscissae");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(r));
    xlo = std::min(xlo, x[i]);
    xhi = std::max(xhi, x[i]);
  }
  if (!any_nonzero) {
    OrderEstimate est;
    est.slope = std::numeric_limits<double>::infinity();
    est.n_points = int(x.size());
    return est;
  }
  if (lx.size() < 3)
    fail(errc::insufficient_data, "order_fit: fewer than 3 samples above noise floor");

  Eigen::MatrixXd A(lx.size(), 2);
  Eigen::VectorXd b(lx.size());
  for (size_t i = 0; i < lx.size(); ++i) {
    A(i, 0) = lx[i];
    A(i, 1) = 1.0;
    b(i) = ly[i];
  }
  Eigen::Vector2d sol = (A.transpose() * A).ldlt().solve(A.transpose() * b);
  OrderEstimate est;
  est.slope = sol[0];
  est.intercept = sol[1];
  est.fit_lo = xlo;
  est.fit_hi = xhi;
  est.residual_rms = std::sqrt((A * sol - b).squaredNorm() / double(lx.size()));
  est.n_points = int(lx.size());
  return est;
}

namespace {

// Exact three-point solve of l = L + c q^i for samples at consecutive
// indices: L = l3 + d2 * q / (1 - q) with q = d2/d1.  Returns NaN when the
// differences do not look like a contraction.
double aitken3(double l1, double l2, double l3) {
  double d1 = l2 - l1, d2 = l3 - l2;
  if (d1 == 0.0) return d2 == 0.0 ? l3 : std::numeric_limits<double>::quiet_NaN();
  double q = d2 / d1;
  if (!(q > 0.0 && q < 1.0)) return std::numeric_limits<double>::quiet_NaN();
  return l3 + d2 * q / (1.0 - q);
}

}  // namespace

LimitFit exp_limit_fit(const std::vector<double>& R, const std::vector<double>& lam,
                       double quality_gate) {
  if (R.size() != lam.size()) fail(errc::config_error, "exp_limit_fit size mismatch");
  size_t n = lam.size();
  if (n < 3) fail(errc::insufficient_data, "exp_limit_fit needs at least 3 samples");
  for (size_t i = 0; i + 1 < n; ++i)
    if (!(R[i] < R[i + 1])) fail(errc::out_of_range, "exp_limit_fit schedule must increase");

  LimitFit out;
  for (size_t i = 0; i + 2 < n; ++i) {
    double w = aitken3(lam[i], lam[i + 1], lam[i + 2]);
    if (std::isfinite(w)) out.window_limits.push_back(w);
  }
  std::ostringstream diag;
  diag << "windows=" << out.window_limits.size() << "/" << (n - 2);
  if (out.window_limits.empty()) {
    // No contraction anywhere: either already converged (flat tail) or the
    // data is not decaying.  Flat tail is fine; anything else is a fit
    // failure.
    double spread = std::abs(lam[n - 1] - lam[n - 2]);
    double scale = std::max(std::abs(lam[n - 1]), 1e-300);
    if (spread / scale < 1e-12) {
      out.limit = lam[n - 1];
      out.fit_quality = spread / scale;
      out.diagnostics = diag.str() + " flat-tail";
      return out;
    }
    fail(errc::fit_failure, "no 3-sample window admits the exponential ansatz");
  }

  const auto& w = out.window_limits;
  if (w.size() >= 3) {
    double second = aitken3(w[w.size() - 3], w[w.size() - 2], w[w.size() - 1]);
    if (std::isfinite(second)) {
      out.limit = second;
      diag << " second-pass";
    } else {
      out.limit = w.back();
      diag << " second-pass-declined";
    }
  } else {
    out.limit = w.back();
  }
  if (w.size() >= 2) {
    out.fit_quality = std::abs(w[w.size() - 1] - w[w.size() - 2]) /
                      std::max(std::abs(out.limit), 1e-300);
  } else {
    out.fit_quality = std::numeric_limits<double>::quiet_NaN();
    diag << " single-window";
  }
  out.diagnostics = diag.str();
  if (!(out.fit_quality <= quality_gate))
    fail(errc::fit_failure, "extrapolation quality " + num_str(out.fit_quality) +
                                " exceeds gate " + num_str(quality_gate) + " (" +
                                out.diagnostics + ")");
  return out;
}

double exp_three_point_limit(const std::array<double, 3>& R, const std::array<double, 3>& lam) {
  if (!(R[0] < R[1] && R[1] < R[2]))
    fail(errc::out_of_range, "exp_three_point_limit needs increasing R");
  double d1 = lam[1] - lam[0], d2 = lam[2] - lam[1];
  double scale = std::max({std::abs(lam[0]), std::abs(lam[2]), 1e-300});
  if (std::abs(d1) < 1e-14 * scale && std::abs(d2) < 1e-14 * scale) return lam[2];
  double q = d2 / d1;
  // Linearized bound: as a -> 0 the difference ratio tends to the spacing
  // ratio, and it decreases to 0 from there.
  double q_max = (R[2] - R[1]) / (R[1] - R[0]);
  if (!(q > 0.0 && q < q_max))
    fail(errc::fit_failure, "difference ratio " + num_str(q) + " outside (0, " + num_str(q_max) +
                                "): not an exponential approach");
  auto ratio = [&](double a) {
    double e1 = std::exp(-a * (R[1] - R[0]));
    double e2 = std::exp(-a * (R[2] - R[1]));
    // (exp(-aR2) - exp(-aR3)) / (exp(-aR1) - exp(-aR2)), divided through by
    // exp(-aR1) to keep it finite for large a.
    return e1 * (1.0 - e2) / (1.0 - e1);
  };
  double lo = 1e-12, hi = 1.0;
  while (ratio(hi) > q) {
    hi *= 2.0;
    if (hi > 1e6) fail(errc::no_convergence, "exp_three_point_limit rate bracket blew up");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (ratio(mid) > q ? lo : hi) = mid;
  }
  double a = 0.5 * (lo + hi);
  double c = d2 / (std::exp(-a * R[2]) - std::exp(-a * R[1]));
  return lam[2] - c * std::exp(-a * R[2]);
}

PowerCoeffFit power_coeff_fit(const std::vector<double>& eps, const std::vector<double>& I,
                              double sigma) {
  if (eps.size() != I.size()) fail(errc::config_error, "power_coeff_fit size mismatch");
  if (eps.size() < 3) fail(errc::insufficient_data, "power_coeff_fit needs at least 3 samples");
  Eigen::MatrixXd A(eps.size(), 2);
  Eigen::VectorXd b(eps.size());
  for (size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0)) fail(errc::out_of_range, "power_coeff_fit needs positive eps");
    A(i, 0) = 1.0;
    A(i, 1) = std::pow(eps[i], sigma);
    b(i) = I[i];
  }
  // The two basis columns differ by many orders of magnitude when sigma < 0;
  // column equilibration keeps the normal equations sane.
  Eigen::Vector2d scale(A.col(0).norm(), A.col(1).norm());
  Eigen::MatrixXd As = A;
  As.col(0) /= scale[0];
  As.col(1) /= scale[1];
  Eigen::Vector2d sol = As.colPivHouseholderQr().solve(b);
  sol[0] /= scale[0];
  sol[1] /= scale[1];
  PowerCoeffFit out;
  out.c0 = sol[0];
  out.c1 = sol[1];
  out.residual_rms = std::sqrt((A * Eigen::Vector2d(sol) - b).squaredNorm() / double(eps.size()));
  return out;
}

}  // namespace ahspec
