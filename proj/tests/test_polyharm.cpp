#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ahspec/plap.hpp"
#include "ahspec/polyharm.hpp"

using namespace ahspec;

namespace {

RadialMetric interval_metric() { return {0, SpaceForm{0.0}, true, "interval"}; }
RadialMetric hyperbolic(int n) {
  return {n, SpaceForm{1.0}, true, "hyperbolic-n" + std::to_string(n)};
}

// Smallest root of cos(k) cosh(k) = 1; rod eigenvalue is k^4.
constexpr double kClampedRod = 500.563901741671;

}  // namespace

TEST_CASE("clamped rod and buckling rod reproduce the classical constants") {
  EigenResult c = clamped_eigenvalue({interval_metric(), 1.0, 2, 0});
  CHECK(c.value == doctest::Approx(kClampedRod).epsilon(1e-8));
  CHECK(c.value >= kClampedRod - 1e-6);
  CHECK(c.mesh_size == 64);

  EigenResult b = buckling_eigenvalue(interval_metric(), 1.0);
  double exact = 4.0 * M_PI * M_PI;
  CHECK(b.value == doctest::Approx(exact).epsilon(1e-8));
  CHECK(b.value >= exact - 1e-6);
}

TEST_CASE("l=1 is the Dirichlet Laplacian") {
  for (double R : {3.0, 20.0}) {
    EigenResult fem = clamped_eigenvalue({hyperbolic(2), R, 1, 0});
    EigenResult shoot = plap_ball_eigenvalue({hyperbolic(2), R, 2.0}, 1e-10);
    CHECK(std::abs(fem.value - shoot.value) / shoot.value <= 1e-4);
    double exact = 1.0 + M_PI * M_PI / (R * R);
    CHECK(fem.value == doctest::Approx(exact).epsilon(1e-5));
    CHECK(fem.value >= exact - 1e-9);
  }
}

TEST_CASE("large hyperbolic balls sit just above the sharp constants") {
  EigenResult c2 = clamped_eigenvalue({hyperbolic(2), 25.0, 2, 0});
  CHECK(c2.value > 1.0);
  CHECK(c2.value < 1.05);

  EigenResult b = buckling_eigenvalue(hyperbolic(2), 25.0);
  CHECK(b.value > 1.0);
  CHECK(b.value < 1.05);
}

TEST_CASE("discrete values are monotone under mesh refinement and in R") {
  // The slack covers the value noise of the ill-conditioned order-2l pencils
  // at doubled resolution; assembly mistakes violate nestedness at O(1).
  for (int l : {2, 3}) {
    EigenResult coarse = clamped_eigenvalue({hyperbolic(2), 5.0, l, 64});
    EigenResult fine = clamped_eigenvalue({hyperbolic(2), 5.0, l, 128});
    CHECK(fine.value <= coarse.value + 1e-5 * (1.0 + coarse.value));
  }
  EigenResult bc = buckling_eigenvalue(hyperbolic(2), 5.0, 64);
  EigenResult bf = buckling_eigenvalue(hyperbolic(2), 5.0, 128);
  CHECK(bf.value <= bc.value + 1e-5 * (1.0 + bc.value));

  double prev = std::numeric_limits<double>::infinity();
  for (double R : {3.0, 5.0, 8.0}) {
    double v = clamped_eigenvalue({hyperbolic(2), R, 2, 0}).value;
    CHECK(v <= prev * (1.0 + 1e-12));
    prev = v;
  }
}

TEST_CASE("clamped and buckling values dominate the Dirichlet eigenvalue") {
  for (double R : {2.0, 5.0, 10.0}) {
    double lam = plap_ball_eigenvalue({hyperbolic(2), R, 2.0}, 1e-10).value;
    double gamma2 = clamped_eigenvalue({hyperbolic(2), R, 2, 0}).value;
    double buck = buckling_eigenvalue(hyperbolic(2), R).value;
    CHECK(gamma2 >= lam * lam * (1.0 - 1e-9));
    CHECK(buck >= lam * (1.0 - 1e-9));
  }
}

TEST_CASE("R->infinity limits hit the sharp constants") {
  PolyharmLimit c2 = polyharm_limit(hyperbolic(2), 2);
  CHECK(std::abs(c2.limit - 1.0) <= 0.02);
  CHECK(c2.values.size() == 6);

  PolyharmLimit c3 = polyharm_limit(hyperbolic(2), 3);
  CHECK(std::abs(c3.limit - 1.0) <= 0.05);

  PolyharmLimit b2 = polyharm_limit(hyperbolic(2), 0);
  CHECK(std::abs(b2.limit - 1.0) <= 0.02);

  PolyharmLimit b3 = polyharm_limit(hyperbolic(3), 0);
  CHECK(std::abs(b3.limit - 9.0 / 4.0) <= 0.02 * 9.0 / 4.0);
}

TEST_CASE("invalid tasks are rejected") {
  CHECK_THROWS_AS(clamped_eigenvalue({hyperbolic(2), -1.0, 2, 0}), Error);
  CHECK_THROWS_AS(clamped_eigenvalue({hyperbolic(2), 5.0, 0, 0}), Error);
  CHECK_THROWS_AS(clamped_eigenvalue({hyperbolic(2), 5.0, 2, 32}), Error);
  CHECK_THROWS_AS(polyharm_limit({2, SpaceForm{0.0}, true, "euclidean"}, 2), Error);
  CHECK_THROWS_AS(polyharm_limit(hyperbolic(2), 2, {5, 10, 15}), Error);
}
