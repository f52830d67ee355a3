#pragma once

#include <functional>

#include "ahspec/errors.hpp"
#include "ahspec/geometry.hpp"

namespace ahspec {

// First zero T(lambda) of the radial p-Laplacian shooting problem in geodesic
// gauge:
//   (|f'|^{p-2} f')' + b(t) |f'|^{p-2} f' + lambda |f|^{p-2} f = 0,
//   f(0) = 1, f'(0) = 0,
// integrated in the flux variable w = |f'|^{p-2} f' which stays C^1 across
// f' = 0.  Returns +infinity when f has no zero before max_t (the NoZero
// sentinel, not an error).  b(t) = n phi'/phi for the metric's geodesic warp;
// a separate overload takes raw coefficient functions for surrogate problems.
struct ShootResult {
  double first_zero = 0;   // +inf when no zero in (0, max_t]
  double f_end = 0;        // f at max_t when no zero was found
  int steps = 0;
};

ShootResult shoot_first_zero(const std::function<double(double)>& b_coeff, int n, double p,
                             double lambda, double max_t, double ode_tol = 1e-8,
                             double root_tol = 1e-10);

ShootResult shoot_first_zero(const RadialMetric& m, double p, double lambda, double max_t,
                             double ode_tol = 1e-8, double root_tol = 1e-10);

}  // namespace ahspec
