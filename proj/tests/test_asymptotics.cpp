#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <ahspec/asymptotics.hpp>
#include <ahspec/errors.hpp>
#include <ahspec/geometry.hpp>

using namespace ahspec;

TEST_CASE("iterated laplacian of r: hyperbolic closed form and leading power") {
  auto m = make_metric("hyperbolic-nf:n=2");
  std::vector<double> rs = {0.1, 0.3, 0.5};
  auto vals = iterated_laplacian_r(m, 1, rs);
  for (size_t i = 0; i < rs.size(); ++i) {
    double r = rs[i];
    CHECK(vals[i] == doctest::Approx(-r - 4 * r * r * r / (1 - r * r)).epsilon(1e-14));
  }

  // Delta^l r = (-(n-1))^l r + O(r^2): read the coefficient deep in the
  // asymptotic regime.
  for (int n : {2, 3}) {
    auto mn = make_metric("hyperbolic-nf:n=" + std::to_string(n));
    for (int l : {1, 2, 3}) {
      auto v = iterated_laplacian_r(mn, l, {1e-6});
      CHECK(v[0] / 1e-6 == doctest::Approx(std::pow(-double(n - 1), l)).epsilon(1e-9));
    }
  }
}

TEST_CASE("iterated laplacian parity on even profiles") {
  auto m = make_metric("hyperbolic-nf:n=2");
  for (int l : {1, 2, 3}) {
    for (double r : {0.15, 0.4, 0.7}) {
      auto v = iterated_laplacian_r(m, l, {r, -r});
      CHECK(v[1] == doctest::Approx(-v[0]).epsilon(1e-12));
    }
  }
}

TEST_CASE("defining-function expansion orders") {
  auto hyp = make_metric("hyperbolic-nf:n=2");
  auto gen = make_metric("generic-nf:n=2:eta=0.15");

  CHECK(check_delta_r_expansion(hyp, 1).slope == doctest::Approx(3.0).epsilon(0.03));
  CHECK(check_delta_r_expansion(gen, 1).slope == doctest::Approx(2.0).epsilon(0.05));
  CHECK(check_delta_r_expansion(hyp, 3).slope >= 2.9);

  CHECK(std::isinf(check_grad_delta_r(hyp, 0).slope));
  CHECK(check_grad_delta_r(hyp, 1).slope >= 2.9);
  CHECK(check_grad_delta_r(gen, 2).slope >= 2.9);
}

TEST_CASE("r^s expansion orders and leading coefficients") {
  auto hyp = make_metric("hyperbolic-nf:n=2");
  auto gen = make_metric("generic-nf:n=2:eta=0.15");
  auto hyp3 = make_metric("hyperbolic-nf:n=3");

  auto rs0 = check_rs_expansion(hyp, 0.9, 0);
  CHECK(std::isinf(rs0.value.slope));
  CHECK(std::isinf(rs0.gradient.slope));

  auto rs1 = check_rs_expansion(hyp, 0.9, 1);
  CHECK(rs1.value.slope >= 0.9 + 1.0 - 0.1);
  CHECK(rs1.gradient.slope >= 2 * 0.9 + 1.0 - 0.1);

  // Non-even profile: the remainder order is exactly s+1.
  auto rsg = check_rs_expansion(gen, 0.9, 1);
  CHECK(rsg.value.slope == doctest::Approx(1.9).epsilon(0.05));

  // Leading coefficients s^m (s-n)^m read off at r = 1e-5.
  {
    double r = 1e-5, s = 0.9;
    TaylorXd u = pow(TaylorXd::variable(r, 3), s);
    TaylorXd a, b;
    radial_laplacian_jets(hyp, r, 3, a, b);
    u = a * u.derivative().derivative() + b * u.derivative();
    CHECK(u.value() / std::pow(r, s) == doctest::Approx(-0.99).epsilon(1e-8));
  }
  {
    double r = 1e-5, s = 1.2;
    TaylorXd u = pow(TaylorXd::variable(r, 5), s);
    TaylorXd a, b;
    radial_laplacian_jets(hyp3, r, 5, a, b);
    for (int i = 0; i < 2; ++i) u = a * u.derivative().derivative() + b * u.derivative();
    CHECK(u.value() / std::pow(r, s) == doctest::Approx(4.6656).epsilon(1e-8));
  }
}

TEST_CASE("lee solver reproduces the model eigenfunction") {
  for (int n : {2, 3}) {
    auto m = make_metric("hyperbolic-nf:n=" + std::to_string(n));
    auto sol = lee_solve(m);

    CHECK(sol.residual <= 1e-8);
    double uerr = 0;
    for (size_t i = 0; i < sol.grid.size(); ++i) {
      double r = sol.grid[i];
      uerr = std::max(uerr, std::abs(sol.u[i] - (1.0 / r + r)));
      CHECK(sol.u[i] > 0.0);
    }
    CHECK(uerr <= 1e-8);

    // normalization r u -> 1 at the boundary
    double r1 = sol.grid.front();
    CHECK(std::abs(r1 * sol.u.front() - 1.0) <= 2 * r1 * r1);

    // u decreasing in r = increasing in geodesic distance from the boundary
    for (size_t i = 1; i < sol.grid.size(); ++i) CHECK(sol.u[i] < sol.u[i - 1]);

    // r^2 coefficient of v = r u against scal_hat/(4n(n-1))
    double target = boundary_data(m).scal_hat / (4.0 * n * (n - 1));
    CHECK(sol.r2_coeff == doctest::Approx(target).epsilon(1e-6));
  }
}

TEST_CASE("lee gradient estimates hold on the model and bound the boundary limit") {
  for (int n : {2, 3}) {
    auto m = make_metric("hyperbolic-nf:n=" + std::to_string(n));
    auto sol = lee_solve(m);
    auto chk = lee_checks(m, sol);
    CHECK(chk.min_margin > 0.0);
    // cosh/sinh identity in the artifact normalization: u^2 - |grad u|^2 = 4
    CHECK(chk.boundary_limit == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(chk.target == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("lee solver rejects what it cannot certify") {
  CHECK_THROWS_AS(lee_solve(make_metric("hyperbolic:n=2")), Error);   // geodesic gauge
  CHECK_THROWS_AS(lee_solve(make_metric("euclidean:n=2")), Error);

  // Non-space-form normal form: the solve is well posed but the gradient
  // estimate theory is not; the op refuses rather than report gauge noise.
  try {
    lee_solve(make_metric("generic-nf:n=2:eta=0.15"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_in_catalog);
  }

  auto m = make_metric("hyperbolic-nf:n=2");
  CHECK_THROWS_AS(lee_solve(m, 4), Error);  // too few nodes

  CHECK_THROWS_AS(iterated_laplacian_r(m, 1, {1.5}), Error);  // outside chart
  CHECK_THROWS_AS(iterated_laplacian_r(m, 0, {0.5}), Error);
}
