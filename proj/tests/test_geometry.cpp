#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ahspec/geometry.hpp"
#include "ahspec/quadrature.hpp"

using namespace ahspec;

TEST_CASE("space form coefficients: a=1, b = n kappa coth(kappa t)") {
  RadialMetric h3 = make_metric("hyperbolic:n=2");
  auto [a, b] = radial_laplacian_coeffs(h3, 1.3);
  CHECK(a == doctest::Approx(1.0));
  CHECK(b == doctest::Approx(2.0 / std::tanh(1.3)).epsilon(1e-13));

  RadialMetric flat = make_metric("euclidean:n=3");
  auto cf = radial_laplacian_coeffs(flat, 0.7);
  CHECK(cf.a == doctest::Approx(1.0));
  CHECK(cf.b == doctest::Approx(3.0 / 0.7).epsilon(1e-13));
}

TEST_CASE("SpaceForm(kappa) and Warped(sinh(kappa t)/kappa) agree at 100 random t") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> td(0.01, 8.0);
  for (double kappa : {0.5, 1.0, 2.0}) {
    RadialMetric sf{3, SpaceForm{kappa}, true, ""};
    RadialMetric wp{3, Warped{Curve::sinh_scaled(kappa)}, true, ""};
    for (int i = 0; i < 100; ++i) {
      double t = td(rng);
      auto c1 = radial_laplacian_coeffs(sf, t);
      auto c2 = radial_laplacian_coeffs(wp, t);
      CHECK(std::abs(c1.a - c2.a) < 1e-12);
      CHECK(std::abs(c1.b - c2.b) < 1e-12 * std::max(1.0, std::abs(c1.b)));
    }
  }
}

TEST_CASE("normal-form coefficients for the hyperbolic ball profile") {
  RadialMetric nf = make_metric("hyperbolic-nf:n=2");
  // c = (1-r^2)/2: b = -r + 2 r^2 (-r)/((1-r^2)/2)... assembled as
  // (1-n) r + n r^2 c'/c with c'/c = -2r/(1-r^2).
  double r = 0.4;
  auto [a, b] = radial_laplacian_coeffs(nf, r);
  CHECK(a == doctest::Approx(r * r).epsilon(1e-14));
  CHECK(b == doctest::Approx(-r - 4.0 * r * r * r / (1.0 - r * r)).epsilon(1e-13));

  CHECK_THROWS_AS(radial_laplacian_coeffs(nf, 1.2), Error);
  CHECK_THROWS_AS(radial_laplacian_coeffs(nf, -0.1), Error);
}

TEST_CASE("density normalizes at the boundary and integrates its own log-derivative") {
  RadialMetric nf = make_metric("hyperbolic-nf:n=2");
  CHECK(density(nf, 0.0).D == doctest::Approx(1.0));
  CHECK(density(nf, 0.5).D == doctest::Approx(std::pow(0.75, 2)).epsilon(1e-13));
  CHECK(density(nf, 0.5).dlogD == doctest::Approx(-4.0 * 0.5 / 0.75).epsilon(1e-13));

  for (const char* key : {"hyperbolic-nf:n=2", "generic-nf:n=3:eta=0.2"}) {
    RadialMetric m = make_metric(key);
    for (double r : {0.2, 0.55, 0.9}) {
      double direct = density(m, r).D;
      double via_log =
          std::exp(quad_adaptive([&](double x) { return density(m, x).dlogD; }, 0.0, r, 1e-12).value);
      CHECK(direct == doctest::Approx(via_log).epsilon(1e-10));
    }
  }

  RadialMetric h3 = make_metric("hyperbolic:n=2");
  CHECK_THROWS_AS(density(h3, 0.3), Error);  // WrongVariant
}

TEST_CASE("boundary data of the hyperbolic ball: vol pi, scal 8, minimal levels") {
  RadialMetric nf = make_metric("hyperbolic-nf:n=2");
  BoundaryData bd = boundary_data(nf);
  CHECK(bd.vol_hat == doctest::Approx(M_PI).epsilon(1e-13));
  CHECK(bd.scal_hat == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(bd.mean_curv == doctest::Approx(0.0));

  // Perturbed profile has c'(0) = eta != 0, so the boundary is not minimal.
  RadialMetric gnf = make_metric("generic-nf:n=2:eta=0.1");
  CHECK(boundary_data(gnf).mean_curv == doctest::Approx(-2.0 * 0.1 / 0.5).epsilon(1e-13));

  CHECK_THROWS_AS(boundary_data(make_metric("hyperbolic:n=2")), Error);
}

TEST_CASE("geodesic warp of the hyperbolic normal form is sinh t") {
  RadialMetric nf = make_metric("hyperbolic-nf:n=2");
  Curve phi = geodesic_warp(nf);
  for (double t : {0.3, 1.0, 2.5, 5.0}) {
    CHECK(phi(t) == doctest::Approx(std::sinh(t)).epsilon(1e-12));
    CHECK(phi.deriv(t, 1) == doctest::Approx(std::cosh(t)).epsilon(1e-11));
    CHECK(phi.deriv(t, 2) == doctest::Approx(std::sinh(t)).epsilon(1e-10));
  }
  // Normal-form coefficients transported to geodesic gauge match the space
  // form: b(t) = n coth t.
  RadialMetric h3 = make_metric("hyperbolic:n=2");
  for (double t : {0.5, 1.5, 3.0}) {
    auto cg = radial_laplacian_coeffs(h3, t);
    double v = phi(t);
    CHECK(2.0 * phi.deriv(t, 1) / v == doctest::Approx(cg.b).epsilon(1e-11));
  }
}

TEST_CASE("normal-form coordinate maps invert each other") {
  RadialMetric nf = make_metric("generic-nf:n=2:eta=0.15");
  for (double r : {0.05, 0.3, 0.8}) {
    double t = normal_form_t_of_r(nf, r);
    CHECK(normal_form_r_of_t(nf, t) == doctest::Approx(r).epsilon(1e-14));
  }
}

TEST_CASE("catalog keys parse strictly") {
  CHECK(make_metric("hyperbolic:n=4").n == 4);
  CHECK(std::get<SpaceForm>(make_metric("spaceform:kappa=0.5:n=3").form).kappa ==
        doctest::Approx(0.5));
  CHECK(make_metric("warped:phi=sinh+eps*t^3:eps=0.01:n=2").n == 2);

  RadialMetric sp = make_metric("warped:phi=spline:pts=0.5@0.52,1@1.18,2@3.63,3@10.02,4@27.3,6@201.7:n=2");
  Curve phi = std::get<Warped>(sp.form).phi;
  CHECK(phi(1.0) == doctest::Approx(1.18).epsilon(1e-12));
  CHECK(phi(0.0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(make_metric("klein-bottle:n=2"), Error);
  CHECK_THROWS_AS(make_metric("hyperbolic:n=2:typo=1"), Error);
  CHECK_THROWS_AS(make_metric("hyperbolic:n=0"), Error);
  CHECK_THROWS_AS(make_metric("hyperbolic"), Error);
  CHECK_THROWS_AS(make_metric("spaceform:kappa=-1:n=2"), Error);
}

TEST_CASE("AH guard rejects flat space forms") {
  CHECK_THROWS_AS(require_ah(make_metric("euclidean:n=2")), Error);
  CHECK_NOTHROW(require_ah(make_metric("hyperbolic:n=2")));
  CHECK_NOTHROW(require_ah(make_metric("hyperbolic-nf:n=3")));
  try {
    require_ah(make_metric("euclidean:n=2"));
  } catch (const Error& e) {
    CHECK(e.code() == errc::degenerate_metric);
  }
}
