#pragma once

#include <vector>

#include "ahspec/eigensolve.hpp"
#include "ahspec/geometry.hpp"

namespace ahspec {

struct PlapTask {
  RadialMetric metric;
  double R = 1.0;
  double p = 2.0;
};

// First Dirichlet p-eigenvalue of the geodesic ball B_R, found by bisecting
// lambda against the sign of the shooting solution at R.  The first
// eigenfunction is radial, so the 1D first-zero characterization is exact.
EigenResult plap_ball_eigenvalue(const PlapTask& task, double tol = 1e-8);

// R -> infinity limit along a schedule of radii, extrapolated through the
// exponential-approach ansatz.  Requires an asymptotically hyperbolic metric.
struct PlapLimit {
  double limit = 0;
  double fit_quality = 0;
  std::vector<double> lambdas;
};

PlapLimit plap_limit(const RadialMetric& m, double p,
                     std::vector<double> R_schedule = {5, 10, 15, 20, 25, 30}, double tol = 1e-9);

// Sharp upper bound for the bottom of the p-spectrum under |dr| >= min_dr:
// (min_dr * n / p)^p.
double cheng_upper_bound(double min_dr, int n, double p);

// Curvature rescaling consistency: lambda_{1,p}(B_R, -kappa^2) should equal
// kappa^p lambda_{1,p}(B_{kappa R}, -1).  Returns the relative discrepancy.
double scaling_check(double kappa, int n, double p, double R, double tol = 1e-8);

}  // namespace ahspec
