#pragma once

#include <vector>

#include "ahspec/fitting.hpp"
#include "ahspec/geometry.hpp"

namespace ahspec {

// Radial cutoff profile in the boundary-defining coordinate r: zero up to
// eps*delta/(1+delta), linear up to eps, one up to eps_r, then a smooth
// polynomial decay to zero at A.  The test function of the sharp-constant
// quotients is r^s times this profile.  outer_profile holds ascending
// coefficients in y = (r - eps_r)/(A - eps_r); the default is the cubic
// smoothstep, any monotone polynomial decay from 1 to 0 works (the limits do
// not see it).  delta = 0 is the inner-limit family with the band collapsed
// to (0, eps].
struct CutoffParams {
  double s = 0.9;
  double eps = 1e-3;
  double delta = 1e-4;
  double eps_r = 0.1;
  double A = 0.5;
  double amplitude = 1.0;
  std::vector<double> outer_profile = {1.0, 0.0, -3.0, 2.0};
};

double cutoff_eval(const CutoffParams& p, double r);

// Rayleigh quotients of r^s * cutoff on a normal-form metric, evaluated by
// adaptive quadrature with the volume element vol_hat r^{-n-1} D(r) dr.  The
// iterated Laplacians act on exact per-piece jets, never on sampled values.
// l = 2m uses the |Delta^m f|^2 numerator, l = 2m+1 uses |grad Delta^m f|^2.
double rayleigh_clamped_numeric(const RadialMetric& m, const CutoffParams& p, int l);

// Numerator |Delta f|^2, denominator |grad f|^2.
double rayleigh_buckling_numeric(const RadialMetric& m, const CutoffParams& p);

// Closed-form limits of the quotients as delta -> 0, eps -> 0 at fixed s,
// in the two published shapes: `paper` keeps the (2s-n+1) divisor on the
// (s+1)-power term, `rederived` uses (2s-n+2).  Both meet (n/2)^{2l} and
// n^2/4 as s -> (n/2)^-.
enum class FormulaVariant { paper, rederived };

double clamped_limit_formula(double s, int n, int l, FormulaVariant v);
double buckling_limit_formula(double s, int n, FormulaVariant v);

// Fits the denominator mass integral (delta = 0) against C0 + C1 eps^{2s-n}
// over a decreasing eps schedule.  Returns the divergence order in .slope
// and, deviating from order_fit semantics, the fitted linear-scale C1 in
// .intercept; the sharp-constant proofs pin C1 = vol_hat (1/(2s-n+2) -
// 1/(2s-n)).
OrderEstimate denominator_coefficient_check(const RadialMetric& m, double s,
                                            const std::vector<double>& eps_schedule);

// Ratio of the divergent-coefficient fits of numerator and denominator over
// an eps schedule: the numeric route to the closed-form limit formulas, free
// of the O(1) contamination a single raw quotient carries.  l = 0 selects
// the buckling quotient.  delta = 0 is the inner-limit family; a fixed
// delta > 0 perturbs the fitted coefficients by O(delta^2) only, since the
// lower knot eps*delta/(1+delta) scales with eps.
struct QuotientLimitEstimate {
  double limit = 0;
  double c1_num = 0;
  double c1_den = 0;
  double num_residual = 0;
  double den_residual = 0;
};

QuotientLimitEstimate quotient_limit_estimate(const RadialMetric& m, double s, int l,
                                              std::vector<double> eps_schedule = {},
                                              double delta = 0.0);

}  // namespace ahspec
