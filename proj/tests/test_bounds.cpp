#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ahspec/asymptotics.hpp>
#include <ahspec/bounds.hpp>
#include <ahspec/errors.hpp>
#include <ahspec/geometry.hpp>
#include <ahspec/plap.hpp>
#include <ahspec/polyharm.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace ahspec;

namespace {

RadialMetric hyp(int n) { return make_metric("hyperbolic:n=" + std::to_string(n)); }

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 90; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

// Simpson oracle for the quotient integrals, entirely off the jet pipeline:
// values sampled on a uniform grid, derivative by central differences.
double simpson_quotient(const RadialTestFunction& f, int n, double p) {
  const int N = 80000;
  const double h = (f.t_hi - f.t_lo) / N;
  auto fval = [&](double t) { return f.f(t); };
  double num = 0, den = 0;
  for (int i = 0; i <= N; ++i) {
    double t = f.t_lo + h * i;
    double wgt = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double df = (i == 0 || i == N) ? 0.0 : (fval(t + h) - fval(t - h)) / (2.0 * h);
    double vol = std::pow(std::sinh(t), double(n));
    num += wgt * std::pow(std::abs(df), p) * vol;
    den += wgt * std::pow(fval(t), p) * vol;
  }
  return num / den;
}

// Full-line positive polynomial profile for the divergence check; support
// bounds are nominal since the ball radius drives the integration window.
RadialTestFunction positive_poly(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double q0 = U(rng), q1 = U(rng), q2 = U(rng);
  Curve f([q0, q1, q2](double t, int order) {
    TaylorXd dt = TaylorXd::variable(t, order) - 2.0;
    TaylorXd q = (q2 * dt + q1) * dt + q0;
    return q * q + 0.05;
  });
  return {f, 0.0, 100.0};
}

}  // namespace

TEST_CASE("w curve closed forms and the golden-section argmax") {
  CHECK(w_curve(2.0, 2.0, 1.0) == 1.0);
  CHECK(w_curve(2.0, 2.0, 0.5) == 0.4375);
  CHECK(w_max(2.0, 2.0).eps_m == 1.0);
  CHECK(w_max(2.0, 2.0).value == 1.0);
  CHECK(w_max(3.0, 3.0).eps_m == 1.0);
  CHECK(w_max(3.0, 3.0).value == 1.0);

  std::mt19937_64 rng(0xB0551);
  std::uniform_real_distribution<double> Ub(0.5, 5.0), Up(1.2, 6.0);
  for (int i = 0; i < 100; ++i) {
    double b = Ub(rng), p = Up(rng);
    WMax wm = w_max(b, p);
    double gs = golden_max([&](double e) { return w_curve(b, p, e); }, 1e-4, 5.0);
    CHECK(std::abs(gs - wm.eps_m) <= 1e-6);
    CHECK(std::abs(wm.value - std::pow(b / p, p)) <= 1e-12 * std::max(1.0, wm.value));
    CHECK(wm.value >= w_curve(b, p, wm.eps_m * 1.07));
    CHECK(wm.value >= w_curve(b, p, wm.eps_m * 0.93));
  }

  CHECK_THROWS_AS(w_curve(0.0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(w_curve(2.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(w_curve(2.0, 2.0, 0.0), Error);
  CHECK_THROWS_AS(w_max(-1.0, 2.0), Error);
}

TEST_CASE("poincare quotients on explicit windows") {
  RadialTestFunction f = smooth_window(1.0, 2.0, 0.35);

  double q22 = poincare_check(hyp(2), f, 2.0);
  CHECK(q22 >= 1.0 - 1e-10);
  CHECK(std::abs(q22 / simpson_quotient(f, 2, 2.0) - 1.0) <= 1e-8);

  double q23 = poincare_check(hyp(2), f, 3.0);
  CHECK(q23 >= std::pow(2.0 / 3.0, 3.0) - 1e-10);

  double q32 = poincare_check(make_metric("spaceform:kappa=1:n=3"), f, 2.0);
  CHECK(q32 >= 2.25 - 1e-10);
  CHECK(std::abs(q32 / simpson_quotient(f, 3, 2.0) - 1.0) <= 1e-8);

  // Normal-form input runs through the same geodesic gauge.
  double qnf = poincare_check(make_metric("hyperbolic-nf:n=2"), f, 2.0);
  CHECK(std::abs(qnf - q22) <= 1e-9 * q22);
}

TEST_CASE("poincare random suite never dips below the sharp constant") {
  const double ps[3] = {1.6, 2.0, 3.0};
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) {
    RadialTestFunction f = random_bump(0xA11CE + i);
    int n = (i % 2) ? 3 : 2;
    RadialMetric m = (n == 2) ? hyp(2) : make_metric("spaceform:kappa=1:n=3");
    double p = ps[i % 3];
    double bound = std::pow(double(n) / p, p);
    double margin = poincare_check(m, f, p) / bound - 1.0;
    CAPTURE(i);
    CHECK(margin >= -1e-10);
    worst = std::min(worst, margin);
  }
  // Random bumps are far from the extremal decay profile.
  CHECK(worst > 0.1);
}

TEST_CASE("poincare near-extremal decay saturates within three percent") {
  double q2 = poincare_check(hyp(2), decaying_window(1.0, 4.0, 100.0, 14.0), 2.0);
  CHECK(q2 >= 1.0 - 1e-10);
  CHECK(q2 <= 1.03);

  double b3 = std::pow(2.0 / 3.0, 3.0);
  double q3 = poincare_check(hyp(2), decaying_window(2.0 / 3.0, 4.0, 100.0, 14.0), 3.0);
  CHECK(q3 >= b3 - 1e-10);
  CHECK(q3 <= 1.03 * b3);

  double qn3 = poincare_check(make_metric("spaceform:kappa=1:n=3"),
                              decaying_window(1.5, 4.0, 100.0, 14.0), 2.0);
  CHECK(qn3 >= 2.25 - 1e-10);
  CHECK(qn3 <= 1.03 * 2.25);
}

TEST_CASE("iterated inequalities hold with exact constants") {
  for (int i = 0; i < 50; ++i) {
    RadialTestFunction f = random_bump(0x17E8 + i);
    IteratedMargins r = iterated_inequality_check(hyp(2), f, 2.0, 1, 2.0);
    CAPTURE(i);
    CHECK(r.lap_constant == 1.0);
    CHECK(r.grad_constant == 1.0);
    CHECK(r.lap_margin >= -1e-10);
    CHECK(r.grad_margin >= -1e-10);
  }

  for (int i = 0; i < 10; ++i) {
    RadialTestFunction f = random_bump(0x27E8 + i);
    IteratedMargins r = iterated_inequality_check(hyp(2), f, 2.0, 2, 2.0);
    CAPTURE(i);
    CHECK(r.lap_constant == 1.0);
    CHECK(r.lap_margin >= -1e-10);
    CHECK(r.grad_margin >= -1e-10);
  }

  // Fractional p and a submanifold-flavoured drift constant b < n.
  for (int i = 0; i < 5; ++i) {
    RadialTestFunction f = random_bump(0x37E8 + i);
    IteratedMargins r = iterated_inequality_check(hyp(2), f, 2.5, 1, 1.3);
    CAPTURE(i);
    CHECK(r.lap_constant == doctest::Approx(std::pow(1.5 * 1.69 / 6.25, 2.5)).epsilon(1e-14));
    CHECK(r.grad_constant == doctest::Approx(std::pow(1.3 / 2.5, 2.5) * r.lap_constant).epsilon(1e-14));
    CHECK(r.lap_margin >= -1e-10);
    CHECK(r.grad_margin >= -1e-10);
  }

  // The n = 3 ambient case with the full drift.
  IteratedMargins r3 = iterated_inequality_check(make_metric("spaceform:kappa=1:n=3"),
                                                 random_bump(0x47E8), 2.0, 1, 3.0);
  CHECK(r3.lap_constant == doctest::Approx(std::pow(2.25, 2.0)).epsilon(1e-14));
  CHECK(r3.lap_margin >= -1e-10);
  CHECK(r3.grad_margin >= -1e-10);
}

TEST_CASE("divergence identity matches the boundary flux") {
  std::mt19937_64 rng(0xD1CE);
  std::uniform_real_distribution<double> U(1.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    RadialTestFunction f = positive_poly(0x5EED + i);
    RadialMetric m = (i % 2) ? make_metric("hyperbolic-nf:n=3") : hyp(2);
    double t_ball = U(rng);
    double p = (i % 3) ? 2.0 : 2.5;
    DivergenceCheck dc = divergence_identity_check(m, f, p, t_ball);
    CAPTURE(i);
    CHECK(dc.boundary_flux > 0.0);
    CHECK(std::abs(dc.volume_integral / dc.boundary_flux - 1.0) <= 1e-6);
  }
}

TEST_CASE("equidistant frame geometry") {
  CHECK(equidistant_frame(0.7, 0.0).t == 0.7);
  CHECK(equidistant_frame(0.7, 0.0).cos2_theta == 1.0);
  CHECK(equidistant_frame(0.0, 1.3).t == 1.3);
  CHECK(equidistant_frame(0.0, 1.3).cos2_theta == 0.0);
  CHECK(equidistant_frame(1.0, 2.0).t > equidistant_frame(1.0, 1.0).t);

  // Far along the hypersurface the normal settles at angle cos^2 = tanh^2 d.
  EquidistantFrame far = equidistant_frame(1.0, 40.0);
  CHECK(std::abs(far.cos2_theta - std::tanh(1.0) * std::tanh(1.0)) <= 1e-12);

  // Second derivative along the normal geodesic vs the frame decomposition
  // Hess(psi)(nu,nu) = psi_tt cos^2 + psi_t coth(t) sin^2, for a profile that
  // is not an eigenfunction so the angle actually matters.
  const double h = 1e-2;
  for (auto [d, t0] : std::vector<std::pair<double, double>>{{0.5, 1.0}, {1.0, 1.7}, {2.0, 2.5}}) {
    double td = std::tanh(d);
    auto t_of = [&](double sg) {
      return std::acosh(std::cosh(t0) * (std::cosh(sg) + td * std::sinh(sg)));
    };
    auto psi = [](double t) { return std::cosh(2.0 * t); };
    double fd = (-psi(t_of(2 * h)) + 16 * psi(t_of(h)) - 30 * psi(t_of(0)) +
                 16 * psi(t_of(-h)) - psi(t_of(-2 * h))) /
                (12 * h * h);
    double c2 = td * td / (std::tanh(t0) * std::tanh(t0));
    double rho = std::acosh(std::cosh(t0) / std::cosh(d));
    CHECK(std::abs(equidistant_frame(d, rho).t - t0) <= 1e-12 * t0);
    CHECK(std::abs(equidistant_frame(d, rho).cos2_theta - c2) <= 1e-12);
    double formula = 4.0 * std::cosh(2 * t0) * c2 +
                     2.0 * std::sinh(2 * t0) / std::tanh(t0) * (1.0 - c2);
    CHECK(std::abs(fd / formula - 1.0) <= 1e-6);

    // The eigenprofile cosh t has no trace-free part: the same stencil must
    // return the value itself, whatever the angle.
    auto u = [](double t) { return std::cosh(t); };
    double fdu = (-u(t_of(2 * h)) + 16 * u(t_of(h)) - 30 * u(t_of(0)) + 16 * u(t_of(-h)) -
                  u(t_of(-2 * h))) /
                 (12 * h * h);
    CHECK(std::abs(fdu / u(t0) - 1.0) <= 1e-6);
  }

  CHECK_THROWS_AS(equidistant_frame(-0.1, 1.0), Error);
  CHECK_THROWS_AS(equidistant_frame(1.0, -0.1), Error);
}

TEST_CASE("submanifold beta on certified models") {
  RadialMetric amb2 = make_metric("hyperbolic-nf:n=2");
  RadialMetric amb3 = make_metric("hyperbolic-nf:n=3");
  LeeSolution sol2 = lee_solve(amb2);
  LeeSolution sol3 = lee_solve(amb3);

  CHECK(submanifold_beta({ModelSubmanifold::Kind::totally_geodesic, 1, 0.0, amb2, 0.0}, sol2) ==
        0.0);
  CHECK(submanifold_beta({ModelSubmanifold::Kind::totally_geodesic, 1, 0.0, amb3, 0.0}, sol3) ==
        0.0);
  CHECK(submanifold_beta({ModelSubmanifold::Kind::totally_geodesic, 2, 0.0, amb3, 0.0}, sol3) ==
        0.0);

  // On the space form the trace-free Hessian vanishes, so the equidistant
  // family reads zero at solver noise, weakly increasing.
  double prev = 0.0;
  for (double d : {0.0, 0.5, 1.0, 2.0}) {
    double beta = submanifold_beta({ModelSubmanifold::Kind::equidistant, 1, d, amb2, 0.0}, sol2);
    CAPTURE(d);
    CHECK(std::abs(beta) <= 1e-9);
    CHECK(beta >= prev - 1e-9);
    prev = beta;
  }

  CHECK_THROWS_AS(
      submanifold_beta({ModelSubmanifold::Kind::totally_geodesic, 2, 0.0, amb2, 0.0}, sol2),
      Error);
  CHECK_THROWS_AS(
      submanifold_beta({ModelSubmanifold::Kind::equidistant, 1, 0.5, amb3, 0.0}, sol3), Error);
  CHECK_THROWS_AS(
      submanifold_beta({ModelSubmanifold::Kind::totally_geodesic, 1, 0.3, amb2, 0.0}, sol2),
      Error);
  CHECK_THROWS_AS(
      submanifold_beta({ModelSubmanifold::Kind::equidistant, 1, -1.0, amb2, 0.0}, sol2), Error);
  CHECK_THROWS_AS(submanifold_beta({ModelSubmanifold::Kind::totally_geodesic, 1, 0.0,
                                    make_metric("hyperbolic:n=2"), 0.0},
                                   sol2),
                  Error);

  try {
    submanifold_beta({ModelSubmanifold::Kind::equidistant, 1, 6.5, amb2, 0.0}, sol2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::out_of_range);
  }

  LeeSolution bad = sol2;
  bad.u[bad.u.size() / 2] *= 1.01;
  try {
    submanifold_beta({ModelSubmanifold::Kind::totally_geodesic, 1, 0.0, amb2, 0.0}, bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::hypothesis_violation);
  }
}

TEST_CASE("submanifold lower bounds and solver cross-checks") {
  SubmanifoldBounds b1 = submanifold_lower_bounds(2, 0.0, 0.0, 2.0, 2);
  CHECK(b1.plap == 1.0);
  CHECK(b1.clamped == 1.0);
  CHECK(b1.buckling == 1.0);

  SubmanifoldBounds b2 = submanifold_lower_bounds(3, 0.5, 0.0, 2.0, 2);
  CHECK(b2.plap == 1.5625);
  CHECK(b2.clamped == 2.44140625);
  CHECK(b2.buckling == 1.5625);

  // A totally geodesic H^(k+1) is intrinsically the k-boundary space form, so
  // the closed forms must match the intrinsic solver limits.
  PlapLimit pl = plap_limit(hyp(2), 2.0);
  CHECK(std::abs(pl.limit - b1.plap) <= 0.01);

  PolyharmLimit k1 = polyharm_limit(make_metric("spaceform:kappa=1:n=1"), 1);
  CHECK(std::abs(k1.limit - submanifold_lower_bounds(1, 0.0, 0.0, 2.0, 1).clamped) <= 0.02 * 0.25);

  CHECK_THROWS_AS(submanifold_lower_bounds(2, 1.5, 0.6, 2.0, 2), Error);
  CHECK_THROWS_AS(submanifold_lower_bounds(2, -0.1, 0.0, 2.0, 2), Error);
  CHECK_THROWS_AS(submanifold_lower_bounds(2, 0.0, 0.0, 1.0, 2), Error);
  CHECK_THROWS_AS(submanifold_lower_bounds(2, 0.0, 0.0, 2.0, 0), Error);
  try {
    submanifold_lower_bounds(2, 1.5, 0.6, 2.0, 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::hypothesis_violation);
  }
}

TEST_CASE("hypothesis and configuration guards") {
  RadialTestFunction f = smooth_window(1.0, 2.0, 0.35);

  CHECK_THROWS_AS(poincare_check(hyp(2), f, 1.0), Error);
  CHECK_THROWS_AS(poincare_check(make_metric("euclidean:n=2"), f, 2.0), Error);

  RadialMetric negy = hyp(2);
  negy.yamabe_nonneg = false;
  try {
    poincare_check(negy, f, 2.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::hypothesis_violation);
  }

  // A window times (t - 1.5) changes sign inside the support.
  Curve signed_profile([](double t, int order) {
    RadialTestFunction w = smooth_window(1.0, 2.0, 0.35);
    return w.f.jet(t, order) * (TaylorXd::variable(t, order) - 1.5);
  });
  RadialTestFunction fs{signed_profile, 1.0, 2.0};
  try {
    poincare_check(hyp(2), fs, 2.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::hypothesis_violation);
  }

  CHECK_THROWS_AS(iterated_inequality_check(hyp(2), f, 2.0, 0, 2.0), Error);
  try {
    iterated_inequality_check(hyp(2), f, 2.0, 1, 2.5);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::hypothesis_violation);
  }

  CHECK_THROWS_AS(divergence_identity_check(hyp(2), f, 1.0, 2.0), Error);
  CHECK_THROWS_AS(divergence_identity_check(hyp(2), f, 2.0, 0.0), Error);
  CHECK_THROWS_AS(smooth_window(1.0, 2.0, 0.6), Error);
  CHECK_THROWS_AS(smooth_window(0.0, 2.0, 0.3), Error);
}
