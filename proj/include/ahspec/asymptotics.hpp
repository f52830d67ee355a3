#pragma once

#include <vector>

#include "ahspec/fitting.hpp"
#include "ahspec/geometry.hpp"

namespace ahspec {

// Values of the l-fold Laplacian applied to the defining function r, by exact
// jet recursion on the radial coefficients (no numeric differencing).
// Negative samples are admitted so parity checks can evaluate the reflected
// coefficient functions; |r| must stay inside the normal-form chart.
std::vector<double> iterated_laplacian_r(const RadialMetric& m, int l,
                                         const std::vector<double>& r_samples);

// Remainder order of Delta^l r - (-(n-1))^l r over a log-spaced window.  The
// two largest samples are excluded from the fit (preasymptotic).  Throws
// HypothesisViolation when the fitted slope falls below 2 - 0.1; even-parity
// metrics come out one order better and the sharper slope is reported as is.
OrderEstimate check_delta_r_expansion(const RadialMetric& m, int l, double r_lo = 1e-4,
                                      double r_hi = 1e-2, int n_samples = 14);

// Remainder order of r^2 (d/dr Delta^m r)^2 - (n-1)^{2m} r^2 against the
// O(r^3) claim; slope gate 3 - 0.1.  m = 0 is exact and reports slope +inf
// (the remainder never leaves the noise floor).
OrderEstimate check_grad_delta_r(const RadialMetric& m, int m_iter, double r_lo = 1e-4,
                                 double r_hi = 1e-2, int n_samples = 14);

// Remainder orders for Delta^m(r^s) and its gradient square against the
// leading terms s^m(s-n)^m r^s and s^{2m+2}(s-n)^{2m} r^{2s}; slope gates
// s+1-0.1 and 2s+1-0.1.  m = 0 reports +inf on both (no Big-O term).
struct RsExpansionCheck {
  OrderEstimate value;
  OrderEstimate gradient;
};
RsExpansionCheck check_rs_expansion(const RadialMetric& m, double s, int m_iter,
                                    double r_lo = 1e-4, double r_hi = 1e-2, int n_samples = 14);

// Radial eigenfunction u ~ 1/r of a u'' + b u' = (n+1) u on a normal-form
// chart whose profile c vanishes at r_center.  Solved for v = r u by
// Chebyshev collocation; the collocation row at the center degenerates to the
// regularity condition r v' - v = 0 on its own, so no boundary bookkeeping
// is needed there.  residual is the max of the ODE defect at the midpoints
// between collocation nodes (on-node defects vanish by construction).
struct LeeSolution {
  std::vector<double> grid;  // increasing, in (0, r_center]
  std::vector<double> u;
  std::vector<double> du;
  double residual = 0;
  double r2_coeff = 0;  // coefficient of r^2 in v = r u at the boundary
};
LeeSolution lee_solve(const RadialMetric& m, int nodes = 48);

// Gradient estimate u^2 - |grad u|^2 > 0 checked at every grid point, and its
// boundary value against scal_hat/(n(n-1)) within 1%.  A violation throws
// HypothesisViolation naming the offending radius: that is the scientifically
// meaningful outcome, not a crash.
struct LeeChecks {
  double min_margin = 0;
  double boundary_limit = 0;
  double target = 0;
};
LeeChecks lee_checks(const RadialMetric& m, const LeeSolution& sol);

}  // namespace ahspec
