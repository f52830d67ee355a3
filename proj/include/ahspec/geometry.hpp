#pragma once

#include <string>
#include <variant>

#include "ahspec/curve.hpp"
#include "ahspec/errors.hpp"
#include "ahspec/taylor.hpp"

namespace ahspec {

// Rotationally symmetric metric on an (n+1)-manifold, in one of three
// presentations:
//   SpaceForm   constant curvature -kappa^2 (kappa > 0) or flat (kappa = 0),
//               geodesic polar coordinates.
//   Warped      dt^2 + phi(t)^2 g_round, geodesic polar, phi(0)=0, phi'(0)=1.
//   NormalForm  r^-2 (dr^2 + c(r)^2 rho0^2 g_round) on 0 < r <= r_center,
//               boundary at r=0, center where c vanishes.
struct SpaceForm {
  double kappa = 1.0;
};

struct Warped {
  Curve phi;
};

struct NormalForm {
  Curve c;
  double rho0 = 1.0;
  double r_center = 1.0;
};

struct RadialMetric {
  int n = 2;  // boundary dimension; manifold dimension is n+1
  std::variant<SpaceForm, Warped, NormalForm> form;
  bool yamabe_nonneg = true;
  std::string key;  // catalog name when built from the registry

  bool is_normal_form() const { return std::holds_alternative<NormalForm>(form); }
};

// Scalar invariants of the conformal boundary for normal-form metrics:
// volume of the boundary metric, its scalar curvature, and the mean curvature
// of the r-level sets at the boundary.
struct BoundaryData {
  double vol_hat = 0;
  double scal_hat = 0;
  double mean_curv = 0;
};

// Coefficients of the radial part of the Laplacian, u'' as seen by the
// solvers: a(x) u'' + b(x) u' with x the native coordinate of the metric
// presentation (geodesic t for SpaceForm/Warped, boundary-defining r for
// NormalForm).
struct LaplacianCoeffs {
  double a = 0;
  double b = 0;
};

LaplacianCoeffs radial_laplacian_coeffs(const RadialMetric& m, double x);

// Same coefficients as truncated expansions, for the iterated-Laplacian
// machinery.
void radial_laplacian_jets(const RadialMetric& m, double x, int order, TaylorXd& a, TaylorXd& b);

// Relative volume density D and its logarithmic derivative in the native
// coordinate.  For NormalForm, D(r) = (c(r)/c(0))^n, the density of the
// compactified volume element against the boundary product.
struct Density {
  double D = 0;
  double dlogD = 0;
};

Density density(const RadialMetric& m, double x);

BoundaryData boundary_data(const RadialMetric& m);

// Geodesic-gauge warp of any metric: phi(t) with phi(0)=0, phi'(0)=1 at the
// center.  For NormalForm this is rho0 e^t c(r_center e^-t) / r_center.
Curve geodesic_warp(const RadialMetric& m);

// Center of the normal-form coordinate (largest r), and the geodesic distance
// from center to the r-level set.
double normal_form_t_of_r(const RadialMetric& m, double r);
double normal_form_r_of_t(const RadialMetric& m, double t);

// Named catalog.  Keys are colon-separated, e.g.
//   hyperbolic:n=2            curvature -1 space form
//   spaceform:kappa=0.5:n=3   curvature -kappa^2 space form
//   euclidean:n=2             flat space form (rejected by the AH-only ops)
//   hyperbolic-nf:n=2         hyperbolic in normal form, c = (1-r^2)/2
//   generic-nf:n=2:eta=0.2    c = (1-r^2)/2 + eta r (1-r^2)^2
//   warped:phi=sinh+eps*t^3:eps=0.01:n=2
//   warped:phi=spline:pts=0.5:0.52,1:1.18,...:n=2   spline through (0,0) and pts
RadialMetric make_metric(const std::string& key);

// Guards shared by the spectral ops: dimension range and the asymptotically
// hyperbolic requirement (flat space forms are representable but rejected).
void require_ah(const RadialMetric& m);

}  // namespace ahspec
