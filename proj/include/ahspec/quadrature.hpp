#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ahspec/errors.hpp"

namespace ahspec {

struct QuadResult {
  double value = 0;
  double err_est = 0;
  int evals = 0;
  int subdivisions = 0;
};

// Endpoint behaviour hint: integrand ~ (distance to endpoint)^exponent with
// exponent > -1.  Supplying it routes the integral through a power
// substitution that removes the singularity before subdivision starts.
struct EndpointPower {
  double exponent;
};

// Adaptive Gauss-Kronrod 7-15 with worst-interval-first refinement.  Interior
// nodes only, so integrable endpoint blowups without a hint still converge,
// just slower.  Throws MaxSubdivisions when the budget is exhausted and
// NonFiniteIntegrand when f returns NaN/inf at a node.
QuadResult quad_adaptive(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-10,
                         std::optional<EndpointPower> left_hint = std::nullopt,
                         std::optional<EndpointPower> right_hint = std::nullopt,
                         int max_subdivisions = 4000);

// Fixed-order Gauss-Legendre rule on [a, b], nodes ascending.  Used by the
// element assembly where adaptivity would break symmetry of the forms.
void gauss_legendre(int npts, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace ahspec
