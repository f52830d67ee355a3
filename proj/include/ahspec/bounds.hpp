#pragma once

#include <cstdint>

#include "ahspec/asymptotics.hpp"
#include "ahspec/curve.hpp"
#include "ahspec/geometry.hpp"

namespace ahspec {

// w(eps) = (b + (1-p) eps^(p/(p-1))) eps^p, the one-parameter family of
// constants the divergence-theorem argument produces.  Its maximum over eps
// is the sharp Poincare constant.
double w_curve(double b, double p, double eps);

// Analytic maximizer eps_m = (b/p)^(1-1/p); value is w evaluated there, so
// comparing it against (b/p)^p exercises the curve, not the formula.
struct WMax {
  double eps_m = 0;
  double value = 0;
};
WMax w_max(double b, double p);

// Radial test function in the geodesic coordinate, compactly supported on
// [t_lo, t_hi].  Jets vanish identically outside the support.
struct RadialTestFunction {
  Curve f;
  double t_lo = 0;
  double t_hi = 0;
};

// Degree-9 smoothstep ramps glued to 0 and 1: rises on [t0, t0+w], holds 1,
// falls on [t1-w, t1].  C^4 across the knots, so fourth derivatives stay
// bounded and the m = 2 iterated integrands are still integrable kinks.
RadialTestFunction smooth_window(double t0, double t1, double w);

// window * (q(t)^2 + 1/20) with q a random quadratic, support drawn inside
// t in (0.5, 5).  Nonnegative by construction.
RadialTestFunction random_bump(std::uint64_t seed);

// e^(-s t) * window.  Near-extremal for the Poincare quotient as s -> n/p
// and the window widens.
RadialTestFunction decaying_window(double s, double t0, double t1, double w);

// int |f'|^p dv / int f^p dv on the geodesic ball gauge.  The sharp lower
// bound (n/p)^p is a theorem for nonnegative f under a nonnegative boundary
// Yamabe class; the caller asserts the margin, nothing is clipped here.
double poincare_check(const RadialMetric& m, const RadialTestFunction& f, double p);

// Iterated inequalities for the m-fold Laplacian with drift constant b
// (b = n on the ambient space, b = k - alpha - beta on a submanifold):
//   int |Delta^m f|^p  >= ((p-1) b^2 / p^2)^(p m)            * int |f|^p
//   int |grad Delta^m f|^p >= (b/p)^p ((p-1) b^2 / p^2)^(p m) * int |f|^p
// Margins are relative and signed.
struct IteratedMargins {
  double mass = 0;
  double laplacian = 0;
  double gradient = 0;
  double lap_constant = 0;
  double grad_constant = 0;
  double lap_margin = 0;
  double grad_margin = 0;
};
IteratedMargins iterated_inequality_check(const RadialMetric& m, const RadialTestFunction& f,
                                          double p, int m_iter, double b);

// Stokes for the radial field f^p grad(ln u) over the geodesic ball of
// radius t_ball, with u the canonical space-form eigenfunction profile
// certified by the lee solver.  The two sides agree up to quadrature error;
// f need not vanish at the boundary, so the flux is genuinely nonzero.
struct DivergenceCheck {
  double volume_integral = 0;
  double boundary_flux = 0;
};
DivergenceCheck divergence_identity_check(const RadialMetric& m, const RadialTestFunction& f,
                                          double p, double t_ball);

// Model submanifolds Y^(k+1) of the normal-form ambient space: totally
// geodesic through the center, or the hypersurface at constant distance d
// from the through-center totally geodesic hypersurface.
struct ModelSubmanifold {
  enum class Kind { totally_geodesic, equidistant };
  Kind kind = Kind::totally_geodesic;
  int k = 1;
  double distance = 0;
  RadialMetric ambient;
  double alpha = 0;
};

// Fermi data of the equidistant hypersurface at offset d: a point at foot
// distance rho sits at ambient distance t from the center, with
// cosh t = cosh d cosh rho, and its unit normal makes an angle theta with
// the radial direction, cos^2 theta = tanh^2 d coth^2 t.
struct EquidistantFrame {
  double t = 0;
  double cos2_theta = 0;
};
EquidistantFrame equidistant_frame(double d, double rho);

// sup over Y of u^-1 tr of the trace-free Hessian of u over the normal
// directions, computed from the certified radial eigenfunction.  The
// tangential Hessian identity u_t phi'/phi = u is verified on the solution
// grid (t >= 0.01) to 1e-9 first; on a space form the trace-free Hessian
// then vanishes, so totally geodesic models return exactly 0 and equidistant
// models return the grid supremum of the residual noise.
double submanifold_beta(const ModelSubmanifold& sub, const LeeSolution& sol);

// Closed-form lower bounds ((k-alpha-beta)/p)^p for the p-Laplacian,
// ((k-alpha-beta)/2)^(2l) clamped, and the l-independent square for
// buckling.  Requires alpha + beta < k.
struct SubmanifoldBounds {
  double plap = 0;
  double clamped = 0;
  double buckling = 0;
};
SubmanifoldBounds submanifold_lower_bounds(int k, double alpha, double beta, double p, int l);

}  // namespace ahspec
