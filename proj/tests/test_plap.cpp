#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ahspec/eigensolve.hpp"
#include "ahspec/plap.hpp"
#include "ahspec/quadrature.hpp"
#include "ahspec/shooting.hpp"

using namespace ahspec;

namespace {

RadialMetric interval_metric() { return {0, SpaceForm{0.0}, true, "interval"}; }

double pi_p(double p) { return 2.0 * M_PI / (p * std::sin(M_PI / p)); }

// First eigenvalue of the weighted 1D p-Rayleigh quotient on piecewise-linear
// functions, by iteratively reweighted linear pencils: freeze |u'|^{p-2} and
// |u|^{p-2} from the current iterate, solve the resulting symmetric pencil,
// repeat.  The fixed point satisfies the discrete Euler-Lagrange equation of
// the p-quotient.  Deliberately independent of the shooting machinery; good
// to 3-4 digits.
double dense_rayleigh_oracle(const RadialMetric& m, double p, double R, int N = 1500,
                             int sweeps = 200) {
  Curve phi = geodesic_warp(m);
  double h = R / N;
  std::vector<double> wmid(N), wnode(N + 1, 0.0);
  for (int i = 0; i < N; ++i) wmid[i] = std::pow(phi((i + 0.5) * h), m.n) * h;
  for (int i = 1; i <= N; ++i) {
    wnode[i - 1] += 0.5 * wmid[i - 1];
    wnode[i] += 0.5 * wmid[i - 1];
  }
  auto quotient = [&](const Eigen::VectorXd& u) {
    double num = 0, den = 0;
    for (int i = 0; i < N; ++i) {
      double up = ((i + 1 < N ? u[i + 1] : 0.0) - u[i]) / h;
      num += std::pow(std::abs(up), p) * wmid[i];
    }
    for (int i = 0; i < N; ++i) den += std::pow(std::abs(u[i]), p) * wnode[i];
    return num / den;
  };

  // Dofs are nodes 0..N-1 (node N is the Dirichlet end).
  Eigen::VectorXd u(N);
  for (int i = 0; i < N; ++i) u[i] = std::cos(0.5 * M_PI * i / N);
  double lam = quotient(u), prev = 0;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    std::vector<Eigen::Triplet<double>> ta, tb;
    for (int i = 0; i < N; ++i) {
      double up = ((i + 1 < N ? u[i + 1] : 0.0) - u[i]) / h;
      double ak = std::max(std::pow(std::abs(up), p - 2.0), 1e-30) * wmid[i] / (h * h);
      ta.emplace_back(i, i, ak);
      if (i + 1 < N) {
        ta.emplace_back(i + 1, i + 1, ak);
        ta.emplace_back(i, i + 1, -ak);
        ta.emplace_back(i + 1, i, -ak);
      }
      double bk = std::max(std::pow(std::abs(u[i]), p - 2.0), 1e-30) * wnode[i];
      tb.emplace_back(i, i, bk);
    }
    Eigen::SparseMatrix<double> A(N, N), B(N, N);
    A.setFromTriplets(ta.begin(), ta.end());
    B.setFromTriplets(tb.begin(), tb.end());
    Eigen::VectorXd v = smallest_generalized_eigen(A, B, 1e-9).vec;
    if (v[0] < 0) v = -v;
    v /= v.cwiseAbs().maxCoeff();
    // Undamped reweighting two-cycles for p > 2; mix the new profile in
    // slowly and the iteration settles onto the Euler-Lagrange fixed point.
    u = u + 0.3 * (v - u);
    u /= u.cwiseAbs().maxCoeff();
    prev = lam;
    lam = quotient(u);
    if (std::abs(lam - prev) < 1e-10 * lam) break;
  }
  return lam;
}

}  // namespace

TEST_CASE("flat interval: p=2 gives pi^2/4 and general p the p-cosine value") {
  EigenResult r = plap_ball_eigenvalue({interval_metric(), 1.0, 2.0}, 1e-10);
  CHECK(r.value == doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-8));
  CHECK(r.residual < 1e-7);

  // First zero of the p-cosine: lambda = (p-1) (pi_p / 2R)^p.
  for (double p : {1.5, 3.0}) {
    double R = 2.0;
    double exact = (p - 1.0) * std::pow(pi_p(p) / (2.0 * R), p);
    EigenResult rp = plap_ball_eigenvalue({interval_metric(), R, p}, 1e-10);
    CHECK(rp.value == doctest::Approx(exact).epsilon(1e-7));
  }
}

TEST_CASE("hyperbolic 3-space ball: closed form 1 + pi^2/R^2") {
  RadialMetric h3 = make_metric("hyperbolic:n=2");
  for (double R : {1.0, 3.0, 10.0}) {
    EigenResult r = plap_ball_eigenvalue({h3, R, 2.0}, 1e-10);
    CHECK(r.value == doctest::Approx(1.0 + M_PI * M_PI / (R * R)).epsilon(1e-7));
  }
  // Normal-form presentation of the same metric gives the same spectrum.
  RadialMetric nf = make_metric("hyperbolic-nf:n=2");
  for (double R : {1.0, 3.0, 5.0}) {
    double a = plap_ball_eigenvalue({h3, R, 2.0}, 1e-9).value;
    double b = plap_ball_eigenvalue({nf, R, 2.0}, 1e-9).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
}

TEST_CASE("large hyperbolic ball sits just above the n^2/4 limit") {
  EigenResult r = plap_ball_eigenvalue({make_metric("hyperbolic:n=2"), 30.0, 2.0}, 1e-10);
  CHECK(r.value > 1.0);
  CHECK(r.value < 1.02);
}

TEST_CASE("p=3 hyperbolic ball beats the oracle and the sharp lower bound") {
  RadialMetric h3 = make_metric("hyperbolic:n=2");
  EigenResult r = plap_ball_eigenvalue({h3, 5.0, 3.0}, 1e-10);
  CHECK(r.value > std::pow(2.0 / 3.0, 3));
  // Independent variational value; its quadrature is midpoint-rule so the
  // agreement window is the oracle's discretization error, not the solver's.
  double oracle = dense_rayleigh_oracle(h3, 3.0, 5.0);
  CHECK(r.value == doctest::Approx(oracle).epsilon(2e-3));
}

TEST_CASE("p=2 shooting matches the P1 variational pencil on a 4000-node mesh") {
  RadialMetric h3 = make_metric("hyperbolic:n=2");
  double R = 3.0;
  int N = 4000;
  double h = R / N;
  Curve phi = geodesic_warp(h3);
  // Dirichlet at t=R, natural at the center; dof i=0..N-1 are the interior
  // plus center nodes.
  std::vector<Eigen::Triplet<double>> ta, tb;
  std::vector<double> x, w;
  for (int e = 0; e < N; ++e) {
    gauss_legendre(3, e * h, (e + 1) * h, x, w);
    double k00 = 0, k01 = 0, k11 = 0, m00 = 0, m01 = 0, m11 = 0;
    for (size_t q = 0; q < x.size(); ++q) {
      double wt = w[q] * std::pow(phi(std::max(x[q], 1e-12)), 2);
      double l0 = ((e + 1) * h - x[q]) / h, l1 = (x[q] - e * h) / h;
      k00 += wt / (h * h);
      k01 -= wt / (h * h);
      k11 += wt / (h * h);
      m00 += wt * l0 * l0;
      m01 += wt * l0 * l1;
      m11 += wt * l1 * l1;
    }
    auto add = [&](int i, int j, double ka, double mb) {
      if (i < N && j < N) {
        ta.emplace_back(i, j, ka);
        tb.emplace_back(i, j, mb);
      }
    };
    add(e, e, k00, m00);
    add(e, e + 1, k01, m01);
    add(e + 1, e, k01, m01);
    add(e + 1, e + 1, k11, m11);
  }
  Eigen::SparseMatrix<double> A(N, N), B(N, N);
  A.setFromTriplets(ta.begin(), ta.end());
  B.setFromTriplets(tb.begin(), tb.end());
  double variational = smallest_generalized_eigen(A, B, 1e-9).value;
  double shooting = plap_ball_eigenvalue({h3, R, 2.0}, 1e-10).value;
  CHECK(std::abs(shooting - variational) / shooting < 1e-5);
}

TEST_CASE("domain monotonicity over random (p, R) pairs on catalog metrics") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> pd(1.3, 4.0), Rd(0.5, 6.0);
  for (const char* key : {"hyperbolic:n=2", "generic-nf:n=2:eta=0.15",
                          "warped:phi=sinh+eps*t^3:eps=0.01:n=3"}) {
    RadialMetric m = make_metric(key);
    for (int i = 0; i < 7; ++i) {
      double p = pd(rng);
      double R1 = Rd(rng), R2 = R1 + 0.5 + Rd(rng) * 0.5;
      double l1 = plap_ball_eigenvalue({m, R1, p}, 1e-8).value;
      double l2 = plap_ball_eigenvalue({m, R2, p}, 1e-8).value;
      CHECK(l1 > l2);
    }
  }
}

TEST_CASE("hyperbolic eigenvalues stay strictly above (n/p)^p") {
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> pd(1.5, 4.0), Rd(1.0, 12.0);
  for (int n : {2, 3}) {
    RadialMetric m{n, SpaceForm{1.0}, true, ""};
    for (int i = 0; i < 6; ++i) {
      double p = pd(rng), R = Rd(rng);
      CHECK(plap_ball_eigenvalue({m, R, p}, 1e-8).value > std::pow(n / p, p));
    }
  }
}

TEST_CASE("plap_limit reaches the sharp constants") {
  PlapLimit a = plap_limit(make_metric("hyperbolic:n=2"), 2.0);
  CHECK(std::abs(a.limit - 1.0) <= 0.01);
  CHECK(a.fit_quality <= 0.10);

  PlapLimit b = plap_limit(make_metric("spaceform:kappa=2:n=3"), 2.0);
  CHECK(std::abs(b.limit - 9.0) <= 0.05);

  PlapLimit c = plap_limit(make_metric("hyperbolic:n=3"), 4.0);
  CHECK(std::abs(c.limit - std::pow(0.75, 4)) / std::pow(0.75, 4) <= 0.01);

  CHECK_THROWS_AS(plap_limit(make_metric("euclidean:n=2"), 2.0), Error);
  CHECK_THROWS_AS(plap_limit(make_metric("hyperbolic:n=2"), 2.0, {5, 10, 15}), Error);
}

TEST_CASE("cheng_upper_bound closed form") {
  CHECK(cheng_upper_bound(1.0, 2, 2.0) == doctest::Approx(1.0));
  CHECK(cheng_upper_bound(0.5, 4, 2.0) == doctest::Approx(1.0));
  for (double p : {2.0, 4.0, 8.0})
    CHECK(cheng_upper_bound(1.0, 3, p) == doctest::Approx(std::pow(3.0 / p, p)));
  CHECK_THROWS_AS(cheng_upper_bound(0.0, 2, 2.0), Error);
  // Limit of the constant-curvature family matches the closed form.
  PlapLimit lim = plap_limit(make_metric("spaceform:kappa=0.5:n=4"), 2.0, {5, 10, 15, 20, 25, 30});
  CHECK(std::abs(lim.limit - cheng_upper_bound(0.5, 4, 2.0)) <= 0.02);
}

TEST_CASE("curvature rescaling discrepancy stays at solver noise") {
  CHECK(scaling_check(1.0, 2, 2.0, 3.0) <= 1e-12);
  CHECK(scaling_check(2.0, 2, 2.0, 3.0, 1e-8) <= 1e-6);
  CHECK(scaling_check(0.5, 3, 2.5, 4.0, 1e-8) <= 1e-6);
}

TEST_CASE("invalid tasks are rejected") {
  CHECK_THROWS_AS(plap_ball_eigenvalue({make_metric("hyperbolic:n=2"), 1.0, 1.0}, 1e-8), Error);
  CHECK_THROWS_AS(plap_ball_eigenvalue({make_metric("hyperbolic:n=2"), -1.0, 2.0}, 1e-8), Error);
}
