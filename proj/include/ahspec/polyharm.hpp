#pragma once

#include <vector>

#include "ahspec/eigensolve.hpp"
#include "ahspec/geometry.hpp"

namespace ahspec {

// Clamped problem for (-Delta)^l on the geodesic ball B_R: minimize the
// quotient int |Delta^m f|^2 phi^n dt / int f^2 phi^n dt (l = 2m), with a
// |d/dt Delta^m f|^2 numerator when l = 2m+1, over radial f with
// f = f' = ... = f^{(l-1)} = 0 at R.  mesh = 0 picks max(64, 8R) elements.
struct ClampedTask {
  RadialMetric metric;
  double R = 1.0;
  int l = 1;
  int mesh = 0;
};

// Discrete minimum over a C^l Hermite space, hence an upper bound for the
// continuous eigenvalue that decreases under mesh refinement.  The default
// residual tolerance sits above the conditioning floor of the order-2l
// forms; the eigenvalue error is quadratic in the pencil residual.
EigenResult clamped_eigenvalue(const ClampedTask& task, double tol = 1e-8);

// Buckling problem: quotient int |Delta f|^2 phi^n dt / int |f'|^2 phi^n dt
// with the clamped (l = 2) boundary conditions.
EigenResult buckling_eigenvalue(const RadialMetric& metric, double R, int mesh = 0,
                                double tol = 1e-8);

// R -> infinity limit along a schedule of radii, same ansatz as plap_limit.
// l = 0 selects the buckling problem.  Requires an asymptotically hyperbolic
// metric.
struct PolyharmLimit {
  double limit = 0;
  double fit_quality = 0;
  std::vector<double> values;
};

PolyharmLimit polyharm_limit(const RadialMetric& m, int l,
                             std::vector<double> R_schedule = {5, 10, 15, 20, 25, 30},
                             double tol = 1e-8);

}  // namespace ahspec
