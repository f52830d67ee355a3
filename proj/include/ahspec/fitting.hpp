#pragma once

#include <array>
#include <string>
#include <vector>

#include "ahspec/errors.hpp"

namespace ahspec {

// Log-log slope of a remainder against the expansion variable, restricted to
// the window where the remainder is both above noise floor and inside the
// asymptotic regime.  slope is +inf when every remainder is exactly zero.
struct OrderEstimate {
  double slope = 0;
  double intercept = 0;
  double fit_lo = 0;
  double fit_hi = 0;
  double residual_rms = 0;
  int n_points = 0;
};

OrderEstimate order_fit(const std::vector<double>& x, const std::vector<double>& remainder,
                        double noise_floor = 1e-13);

// Limit of a sequence lam(R) assumed to approach a constant like
// lam_inf + c * exp(-a R).  Each window of three consecutive samples pins the
// ansatz exactly; a second pass applies the same three-point solve to the
// window limits, which cancels the slowly varying part when the true decay is
// not a pure exponential.  fit_quality is the relative spread the ansatz
// leaves unexplained; above 10% the data does not support extrapolation and
// the fit throws.
struct LimitFit {
  double limit = 0;
  double fit_quality = 0;
  std::vector<double> window_limits;
  std::string diagnostics;
};

LimitFit exp_limit_fit(const std::vector<double>& R, const std::vector<double>& lam,
                       double quality_gate = 0.10);

// Exact solve of lam = L + c exp(-a R) through three samples at arbitrary
// increasing R; the equally spaced case agrees with the window solve inside
// exp_limit_fit.  Flat data returns the last sample; data whose differences
// are not a contraction is a FitFailure.
double exp_three_point_limit(const std::array<double, 3>& R, const std::array<double, 3>& lam);

// Least squares for I(eps) = c0 + c1 * eps^sigma on a decreasing eps
// schedule; extracts the coefficient of the divergent (sigma < 0) or
// vanishing (sigma > 0) part.
struct PowerCoeffFit {
  double c0 = 0;
  double c1 = 0;
  double residual_rms = 0;
};

PowerCoeffFit power_coeff_fit(const std::vector<double>& eps, const std::vector<double>& I,
                              double sigma);

}  // namespace ahspec
