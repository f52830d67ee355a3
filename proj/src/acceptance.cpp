#include "ahspec/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>

#include "ahspec/asymptotics.hpp"
#include "ahspec/bounds.hpp"
#include "ahspec/plap.hpp"
#include "ahspec/polyharm.hpp"
#include "ahspec/report.hpp"
#include "ahspec/testfamily.hpp"

namespace ahspec {

const std::vector<std::string>& acceptance_columns() {
  static const std::vector<std::string> cols = {"criterion", "name",   "check", "value",
                                                "target",    "within", "pass"};
  return cols;
}

int criterion_count() { return 10; }

namespace {

struct Checker {
  CriterionResult res;
  std::ostringstream note;

  Checker(int index, const char* name, double budget) {
    res.index = index;
    res.name = name;
    res.budget_seconds = budget;
    res.passed = true;
  }

  void push(const std::string& check, const std::string& value, const std::string& target,
            const std::string& within, bool ok) {
    res.rows.push_back({std::to_string(res.index), res.name, check, value, target, within,
                        ok ? "1" : "0"});
    res.passed = res.passed && ok;
  }
  // |value - target| <= rel * |target|
  void eq(const std::string& check, double value, double target, double rel) {
    push(check, fmt_num(value), fmt_num(target), fmt_num(rel),
         std::abs(value - target) <= rel * std::abs(target));
  }
  // value >= bound - slack
  void ge(const std::string& check, double value, double bound, double slack) {
    push(check, fmt_num(value), fmt_num(bound), fmt_num(slack), value >= bound - slack);
  }
  // value <= bound + slack
  void le(const std::string& check, double value, double bound, double slack) {
    push(check, fmt_num(value), fmt_num(bound), fmt_num(slack), value <= bound + slack);
  }
  void gt(const std::string& check, double value, double bound) {
    push(check, fmt_num(value), fmt_num(bound), "strict", value > bound);
  }
  void flag(const std::string& check, bool ok) { push(check, ok ? "1" : "0", "1", "0", ok); }
};

RadialMetric geo(int n) { return make_metric("hyperbolic:n=" + std::to_string(n)); }
RadialMetric nf(int n) { return make_metric("hyperbolic-nf:n=" + std::to_string(n)); }

int default_clamped_mesh(double R) { return std::max(64, int(std::lround(8.0 * R))); }

const std::vector<double> kSchedule = {5, 10, 15, 20, 25, 30};
const std::vector<double> kSlowSchedule = {15, 20, 25, 30, 35, 40};

double golden_max_arg(const std::function<double(double)>& f, double lo, double hi) {
  const double inv = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv * (b - a), d = a + inv * (b - a);
  for (int i = 0; i < 90; ++i) {
    if (f(c) > f(d))
      b = d;
    else
      a = c;
    c = b - inv * (b - a);
    d = a + inv * (b - a);
  }
  return 0.5 * (a + b);
}

void crit1(Checker& c) {
  PlapLimit pl = plap_limit(geo(2), 2.0, kSchedule);
  c.eq("limit", pl.limit, 1.0, 0.01);
  double lo = INFINITY;
  for (size_t i = 0; i < pl.lambdas.size(); ++i) {
    c.gt("lambda-R=" + fmt_num(kSchedule[i]) + "-strictly-above-1", pl.lambdas[i], 1.0);
    lo = std::min(lo, pl.lambdas[i]);
  }
  c.note << "limit=" << fmt_num(pl.limit) << " err=" << fmt_num(pl.limit - 1.0)
         << "; min lambda(R)-1=" << fmt_num(lo - 1.0);
}

void crit2(Checker& c) {
  RadialMetric h3 = geo(3);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    double target = std::pow(3.0 / p, p);
    PlapLimit pl = plap_limit(h3, p, kSchedule);
    c.eq("limit-p=" + fmt_num(p), pl.limit, target, 0.01);
    c.note << "p=" << fmt_num(p) << ": " << fmt_num(pl.limit / target - 1.0) << "  ";
  }
  double sc = scaling_check(2.0, 3, 2.0, 5.0);
  c.le("scaling-kappa=2-discrepancy", sc, 1e-6, 0.0);
  c.note << "scaling=" << fmt_num(sc);
}

void crit3(Checker& c) {
  RadialMetric h2 = geo(2);
  for (int l : {1, 2, 3}) {
    PolyharmLimit pol = polyharm_limit(h2, l, kSchedule);
    c.eq("limit-l=" + std::to_string(l), pol.limit, 1.0, l == 3 ? 0.05 : 0.02);
    c.note << "l=" << l << ": " << fmt_num(pol.limit - 1.0) << "  ";

    // The doubled l=3 meshes hit the round-off residual floor of the
    // sixth-order pencil near 1e-6; the 1e-5 comparison slack does not need
    // eigenvalues tighter than that.
    double worst_step = -INFINITY;
    for (double R : kSchedule) {
      int m0 = default_clamped_mesh(R);
      double coarse = clamped_eigenvalue({h2, R, l, m0}, 1e-6).value;
      double fine = clamped_eigenvalue({h2, R, l, 2 * m0}, 1e-6).value;
      worst_step = std::max(worst_step, (fine - coarse) / (1.0 + coarse));
    }
    c.le("mesh-refine-max-step-l=" + std::to_string(l), worst_step, 0.0, 1e-5);
  }
  double cross = INFINITY;
  for (double R : kSchedule) {
    double gamma2 = clamped_eigenvalue({h2, R, 2, 0}).value;
    double lam = plap_ball_eigenvalue({h2, R, 2.0}, 1e-10).value;
    cross = std::min(cross, gamma2 / (lam * lam) - 1.0);
  }
  c.ge("cross-bound-min-margin", cross, 0.0, 1e-9);
  c.note << "cross=" << fmt_num(cross);
}

void crit4(Checker& c) {
  for (int n : {2, 3}) {
    RadialMetric m = geo(n);
    double target = 0.25 * n * n;
    PolyharmLimit pol = polyharm_limit(m, 0, kSchedule);
    c.eq("limit-n=" + std::to_string(n), pol.limit, target, 0.02);
    double worst = INFINITY;
    for (double R : kSchedule) {
      double buck = buckling_eigenvalue(m, R).value;
      double lam = plap_ball_eigenvalue({m, R, 2.0}, 1e-10).value;
      worst = std::min(worst, buck / lam - 1.0);
    }
    c.ge("buckling-vs-dirichlet-min-margin-n=" + std::to_string(n), worst, 0.0, 1e-9);
    c.note << "n=" << n << ": limit=" << fmt_num(pol.limit) << " dom=" << fmt_num(worst) << "  ";
  }
}

void crit5(Checker& c) {
  RadialMetric m = nf(2);
  for (int k = 4; k <= 8; ++k) {
    double s = 1.0 - std::pow(10.0, -k);
    double gate = 10.0 * std::pow(10.0, -k);
    for (int l : {2, 3}) {
      double worst = 0.0;
      for (auto v : {FormulaVariant::paper, FormulaVariant::rederived})
        worst = std::max(worst, std::abs(clamped_limit_formula(s, 2, l, v) - 1.0));
      c.le("formula-clamped-l=" + std::to_string(l) + "-k=" + std::to_string(k), worst, gate, 0.0);
    }
    double worstb = 0.0;
    for (auto v : {FormulaVariant::paper, FormulaVariant::rederived})
      worstb = std::max(worstb, std::abs(buckling_limit_formula(s, 2, v) - 1.0));
    c.le("formula-buckling-k=" + std::to_string(k), worstb, gate, 0.0);
  }

  // Variant discrimination away from the endpoint, where the two divisors
  // differ at O(1): the coefficient-ratio estimate must sit decisively on
  // one side.  The rederived shape wins; the quotient checks below use it.
  for (double s : {0.8, 0.9}) {
    auto est = quotient_limit_estimate(m, s, 2);
    double dr = std::abs(est.limit - clamped_limit_formula(s, 2, 2, FormulaVariant::rederived));
    double dp = std::abs(est.limit - clamped_limit_formula(s, 2, 2, FormulaVariant::paper));
    c.le("variant-distance-ratio-s=" + fmt_num(s), dr / dp, 0.2, 0.0);
  }
  c.note << "matching variant: rederived; ";

  for (int l : {2, 3, 0}) {
    auto est = quotient_limit_estimate(m, 0.99, l, {}, 1e-4);
    double f = l == 0 ? buckling_limit_formula(0.99, 2, FormulaVariant::rederived)
                      : clamped_limit_formula(0.99, 2, l, FormulaVariant::rederived);
    std::string tag = l == 0 ? "B" : std::to_string(l);
    c.eq("numeric-s=0.99-l=" + tag, est.limit, f, 0.05);
    c.note << "l=" << tag << ": " << fmt_num(est.limit / f - 1.0) << "  ";
  }
}

void crit6(Checker& c) {
  RadialMetric m = nf(2);
  double vol = boundary_data(m).vol_hat;
  std::vector<double> sched;
  for (int k = 0; k <= 7; ++k) sched.push_back(1e-3 * std::pow(10.0, -0.5 * k));
  for (double s : {0.8, 0.9, 0.95}) {
    auto est = denominator_coefficient_check(m, s, sched);
    double sigma = 2.0 * s - 2.0;
    double target = vol * (1.0 / (sigma + 2.0) - 1.0 / sigma);
    c.eq("coefficient-s=" + fmt_num(s), est.intercept, target, 0.02);
    c.le("order-error-s=" + fmt_num(s), std::abs(est.slope - sigma), 0.02, 0.0);
    c.note << "s=" << fmt_num(s) << ": " << fmt_num(est.intercept / target - 1.0) << "  ";
  }
}

void crit7(Checker& c) {
  struct Probe {
    RadialMetric m;
    const char* tag;
    double r_lo, r_hi;  // rs-expansion window; the generic profile needs the
                        // deeper one to clear the remainder's sign change
  };
  for (Probe pr : {Probe{nf(2), "hyp", 1e-4, 1e-2},
                   Probe{make_metric("generic-nf:n=2:eta=0.15"), "gen", 1e-5, 1e-3}}) {
    double dr_min = INFINITY;
    for (int l : {1, 2, 3}) dr_min = std::min(dr_min, check_delta_r_expansion(pr.m, l).slope);
    c.ge(std::string("delta-r-min-slope-") + pr.tag, dr_min, 1.9, 0.0);

    bool grad0_exact = std::isinf(check_grad_delta_r(pr.m, 0).slope);
    c.flag(std::string("grad-m0-remainder-below-1e-12-") + pr.tag, grad0_exact);
    double gr_min = INFINITY;
    for (int mi : {1, 2, 3}) gr_min = std::min(gr_min, check_grad_delta_r(pr.m, mi).slope);
    c.ge(std::string("grad-delta-r-min-slope-") + pr.tag, gr_min, 2.9, 0.0);

    bool rs0_exact = true;
    double v_margin = INFINITY, g_margin = INFINITY;
    for (double s : {0.6, 0.9, 1.2}) {
      for (int mi : {0, 1, 2, 3}) {
        auto rs = check_rs_expansion(pr.m, s, mi, pr.r_lo, pr.r_hi);
        if (mi == 0) {
          rs0_exact = rs0_exact && std::isinf(rs.value.slope) && std::isinf(rs.gradient.slope);
        } else {
          v_margin = std::min(v_margin, rs.value.slope - (s + 0.9));
          g_margin = std::min(g_margin, rs.gradient.slope - (2.0 * s + 0.9));
        }
      }
    }
    c.flag(std::string("rs-m0-remainder-below-1e-12-") + pr.tag, rs0_exact);
    c.ge(std::string("rs-value-min-slope-margin-") + pr.tag, v_margin, 0.0, 0.0);
    c.ge(std::string("rs-gradient-min-slope-margin-") + pr.tag, g_margin, 0.0, 0.0);
    c.note << pr.tag << ": dr=" << fmt_num(dr_min) << " grad=" << fmt_num(gr_min)
           << " rs=+" << fmt_num(v_margin) << "/+" << fmt_num(g_margin) << "  ";
  }
}

void crit8(Checker& c) {
  for (int n : {2, 3}) {
    std::string tag = "-n=" + std::to_string(n);
    RadialMetric m = nf(n);
    LeeSolution sol = lee_solve(m);
    LeeChecks chk = lee_checks(m, sol);
    c.le("residual" + tag, sol.residual, 1e-8, 0.0);
    // On this chart r = e^{-t} exactly, so the model profile is 1/r + r.
    double uerr = 0.0;
    for (size_t i = 0; i < sol.grid.size(); ++i)
      uerr = std::max(uerr, std::abs(sol.u[i] - (1.0 / sol.grid[i] + sol.grid[i])));
    c.le("cosh-profile-max-error" + tag, uerr, 1e-8, 0.0);
    double r0 = sol.grid.front();
    c.le("boundary-normalization" + tag, std::abs(r0 * sol.u.front() - 1.0), 2.0 * r0 * r0, 0.0);
    c.gt("gradient-estimate-min" + tag, chk.min_margin, 0.0);
    double r2_target = boundary_data(m).scal_hat / (4.0 * n * (n - 1));
    c.eq("r2-coefficient" + tag, sol.r2_coeff, r2_target, 0.01);
    c.eq("boundary-limit" + tag, chk.boundary_limit, chk.target, 0.01);
    c.note << "n=" << n << ": uerr=" << fmt_num(uerr) << " r2=" << fmt_num(sol.r2_coeff) << "  ";
  }
}

void crit9(Checker& c) {
  const double kPs[3] = {1.5, 2.0, 3.0};
  RadialMetric mets[2] = {geo(2), geo(3)};
  double min_margin = INFINITY;
  for (int i = 0; i < 200; ++i) {
    const RadialMetric& m = mets[i % 2];
    double p = kPs[i % 3];
    double bound = std::pow(m.n / p, p);
    double q = poincare_check(m, random_bump(0xA11CE + std::uint64_t(i)), p);
    min_margin = std::min(min_margin, q / bound - 1.0);
  }
  c.ge("random-bump-min-margin-200", min_margin, 0.0, 1e-10);
  c.note << "bump min=" << fmt_num(min_margin) << "; excess ";

  double min_excess = INFINITY;
  for (auto [n, p] : {std::pair{2, 2.0}, {2, 3.0}, {3, 2.0}}) {
    double bound = std::pow(n / p, p);
    double q = poincare_check(geo(n), decaying_window(n / p, 4.0, 100.0, 14.0), p);
    double excess = q / bound - 1.0;
    c.le("near-extremal-excess-n=" + std::to_string(n) + "-p=" + fmt_num(p), excess, 0.03, 0.0);
    min_excess = std::min(min_excess, excess);
    c.note << fmt_num(excess) << " ";
  }
  c.ge("near-extremal-min-excess", min_excess, 0.0, 1e-10);

  std::mt19937_64 rng(0x57A7D00DULL);
  std::uniform_real_distribution<double> ub(0.5, 5.0), up(1.2, 6.0);
  double worst_arg = 0.0, worst_val = 0.0;
  for (int i = 0; i < 100; ++i) {
    double b = ub(rng), p = up(rng);
    WMax wm = w_max(b, p);
    double numeric =
        golden_max_arg([&](double e) { return w_curve(b, p, e); }, 1e-6, 3.0 * wm.eps_m + 1.0);
    worst_arg = std::max(worst_arg, std::abs(numeric - wm.eps_m));
    worst_val = std::max(worst_val, std::abs(wm.value - std::pow(b / p, p)));
  }
  c.le("wmax-argmax-vs-numeric-100", worst_arg, 1e-6, 0.0);
  c.le("wmax-value-vs-closed-form-100", worst_val, 1e-12, 0.0);

  double lin_lap = INFINITY, lin_grad = INFINITY;
  for (int i = 0; i < 50; ++i) {
    auto mr = iterated_inequality_check(geo(2), random_bump(0xB0B + std::uint64_t(i)), kPs[i % 3],
                                        1 + i % 2, 2.0);
    lin_lap = std::min(lin_lap, mr.lap_margin);
    lin_grad = std::min(lin_grad, mr.grad_margin);
  }
  c.ge("iterated-laplacian-min-margin-50", lin_lap, 0.0, 1e-10);
  c.ge("iterated-gradient-min-margin-50", lin_grad, 0.0, 1e-10);
  c.note << "; lin=" << fmt_num(lin_lap) << "/" << fmt_num(lin_grad);
}

void crit10(Checker& c) {
  for (auto [k, n_amb] : {std::pair{1, 2}, {2, 3}}) {
    std::string tag = "-k=" + std::to_string(k);
    RadialMetric amb = nf(n_amb);
    LeeSolution sol = lee_solve(amb);
    ModelSubmanifold tg{ModelSubmanifold::Kind::totally_geodesic, k, 0.0, amb, 0.0};
    double beta = submanifold_beta(tg, sol);
    c.le("beta-totally-geodesic" + tag, std::abs(beta), 1e-9, 0.0);

    SubmanifoldBounds b = submanifold_lower_bounds(k, 0.0, 0.0, 2.0, 2);
    c.eq("bound-plap-closed-form" + tag, b.plap, std::pow(k / 2.0, 2), 1e-14);
    c.eq("bound-clamped-closed-form" + tag, b.clamped, std::pow(k / 2.0, 4), 1e-14);
    c.eq("bound-buckling-closed-form" + tag, b.buckling, std::pow(k / 2.0, 2), 1e-14);
    SubmanifoldBounds bm = submanifold_lower_bounds(k, 0.0, beta, 2.0, 2);
    c.eq("bounds-stable-under-measured-beta" + tag, bm.plap, b.plap, 1e-8);

    // A totally geodesic model of boundary dimension k is the k+1 space form,
    // so its intrinsic limits must land on the closed-form bounds.
    RadialMetric inner = geo(k);
    const std::vector<double>& sched = k == 1 ? kSlowSchedule : kSchedule;
    double pl = plap_limit(inner, 2.0, sched).limit;
    double cl = polyharm_limit(inner, 2, sched).limit;
    double bu = polyharm_limit(inner, 0, sched).limit;
    c.eq("intrinsic-plap" + tag, pl, b.plap, 0.02);
    c.eq("intrinsic-clamped-l=2" + tag, cl, b.clamped, 0.02);
    c.eq("intrinsic-buckling" + tag, bu, b.buckling, 0.02);
    c.note << "k=" << k << ": beta=" << fmt_num(beta) << " lims " << fmt_num(pl / b.plap - 1.0)
           << "/" << fmt_num(cl / b.clamped - 1.0) << "/" << fmt_num(bu / b.buckling - 1.0)
           << "  ";
  }
}

struct Registry {
  const char* name;
  double budget;
  void (*fn)(Checker&);
};

const Registry kCriteria[10] = {
    {"mckean-plap-limit", 10, crit1},     {"plap-sharp-constants", 60, crit2},
    {"clamped-limits", 180, crit3},       {"buckling-limits", 120, crit4},
    {"test-family-formulas", 120, crit5}, {"denominator-coefficient", 60, crit6},
    {"expansion-lemmas", 60, crit7},      {"lee-eigenfunction", 30, crit8},
    {"poincare-property-suite", 120, crit9}, {"submanifold-sharpness", 120, crit10},
};

}  // namespace

CriterionResult run_criterion(int index) {
  if (index < 1 || index > criterion_count())
    fail(errc::config_error, "criterion index " + std::to_string(index) + " outside 1.." +
                                 std::to_string(criterion_count()));
  const Registry& reg = kCriteria[index - 1];
  Checker c(index, reg.name, reg.budget);
  auto t0 = std::chrono::steady_clock::now();
  try {
    reg.fn(c);
  } catch (const Error& e) {
    c.push("error", e.what(), "no-exception", "0", false);
  }
  c.res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.res.seconds > c.res.budget_seconds) {
    c.res.passed = false;
    c.note << " | budget " << fmt_num(c.res.budget_seconds) << "s exceeded";
  }
  c.res.detail = c.note.str();
  return c.res;
}

}  // namespace ahspec
