#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "ahspec/acceptance.hpp"
#include "ahspec/asymptotics.hpp"
#include "ahspec/bounds.hpp"
#include "ahspec/fitting.hpp"
#include "ahspec/geometry.hpp"
#include "ahspec/plap.hpp"
#include "ahspec/polyharm.hpp"
#include "ahspec/report.hpp"
#include "ahspec/testfamily.hpp"

namespace {

using namespace ahspec;
namespace fs = std::filesystem;

struct Options {
  std::string metric;  // empty = per-command default
  std::vector<double> p, R, s, eps;
  std::vector<int> l;
  double delta = 1e-4;
  double tol = 0;  // 0 = per-task default
  int mesh = 0;
  std::string out = ".";
  std::uint64_t seed = 1;
  bool plots = false;
  bool no_cache = false;
};

struct Run {
  Table table;
  std::vector<RowMeta> meta;
  std::vector<Series> series;
  std::vector<std::string> failures;
  bool cache_enabled = true;
  std::string current_task = "setup";
};

// Full-precision parameter spelling for cache fingerprints.
std::string c17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string c17_join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += c17(x) + ";";
  return out;
}

using RowGroup = std::vector<std::vector<std::string>>;

// One cacheable unit: either replay the stored rows bytewise or compute,
// append, and store the appended (sanitized) rows.  A corrupt record warns
// and falls through to the compute path.
void rows_via_cache(Run& run, const std::string& canonical,
                    const std::function<std::pair<RowGroup, std::string>()>& compute) {
  std::string fp = fingerprint(canonical);
  if (run.cache_enabled) {
    try {
      if (auto hit = cache_lookup(fp)) {
        for (auto& row : decode_rows(*hit, run.table.columns.size())) {
          table_append(run.table, std::move(row));
          run.meta.push_back({true, 0.0, ""});
        }
        return;
      }
    } catch (const Error& e) {
      if (e.code() != errc::corrupt_cache) throw;
      std::cerr << "ahspec: warning: " << e.what() << "; recomputing\n";
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  auto [rows, diag] = compute();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  size_t first = run.table.rows.size();
  for (auto& row : rows) {
    table_append(run.table, std::move(row));
    run.meta.push_back({false, secs / double(rows.size()), diag});
  }
  if (run.cache_enabled)
    cache_store(fp, encode_rows({run.table.rows.begin() + long(first), run.table.rows.end()}));
}

RadialMetric resolve_metric(Run& run, const Options& o, const char* fallback) {
  run.current_task = "metric setup";
  return make_metric(o.metric.empty() ? fallback : o.metric);
}

std::vector<double> schedule_or(const Options& o, std::vector<double> fallback) {
  std::vector<double> sched = o.R.empty() ? std::move(fallback) : o.R;
  for (size_t i = 0; i + 1 < sched.size(); ++i)
    if (!(sched[i] < sched[i + 1])) fail(errc::config_error, "R schedule must increase");
  return sched;
}

bool uniform_spacing(const std::vector<double>& v) {
  if (v.size() < 2) return true;
  double h = v[1] - v[0];
  for (size_t i = 1; i + 1 < v.size(); ++i)
    if (std::abs((v[i + 1] - v[i]) - h) > 1e-9 * h) return false;
  return true;
}

double parse_cell(const std::string& s) { return std::stod(s); }

// The limit rows below share one policy: four or more uniformly spaced radii
// go through the windowed fit, shorter or uneven schedules fall back to the
// exact three-point solve on the last three radii.
void cmd_plap(const Options& o, Run& run) {
  run.table.columns = {"task", "metric", "p", "R", "value", "reference", "margin", "note"};
  RadialMetric m = resolve_metric(run, o, "hyperbolic:n=2");
  std::vector<double> ps = o.p.empty() ? std::vector<double>{2.0} : o.p;
  std::vector<double> sched = schedule_or(o, {5, 10, 15, 20, 25, 30});
  double tol = o.tol > 0 ? o.tol : 1e-9;

  for (double p : ps) {
    double ref = cheng_upper_bound(1.0, m.n, p);
    Series ser{"p=" + fmt_num(p), {}};
    for (double R : sched) {
      run.current_task = "plap p=" + fmt_num(p) + " R=" + fmt_num(R);
      rows_via_cache(
          run, "plap|" + m.key + "|p=" + c17(p) + "|R=" + c17(R) + "|tol=" + c17(tol),
          [&]() -> std::pair<RowGroup, std::string> {
            EigenResult er = plap_ball_eigenvalue({m, R, p}, tol);
            return {{{"plap", m.key, fmt_num(p), fmt_num(R), fmt_num(er.value), fmt_num(ref),
                      fmt_num(er.value / ref - 1.0), ""}},
                    er.diagnostics};
          });
      ser.points.push_back({R, parse_cell(run.table.rows.back()[4])});
    }
    if (sched.size() >= 3) {
      run.current_task = "plap-limit p=" + fmt_num(p);
      rows_via_cache(
          run, "plap-limit|" + m.key + "|p=" + c17(p) + "|R=" + c17_join(sched) + "|tol=" +
                   c17(tol),
          [&]() -> std::pair<RowGroup, std::string> {
            require_ah(m);
            double value;
            std::string note;
            if (sched.size() >= 4 && uniform_spacing(sched)) {
              PlapLimit pl = plap_limit(m, p, sched, tol);
              value = pl.limit;
              note = "fit_quality=" + fmt_num(pl.fit_quality);
            } else {
              size_t i = sched.size() - 3;
              std::array<double, 3> Rs = {sched[i], sched[i + 1], sched[i + 2]};
              std::array<double, 3> ls;
              for (int j = 0; j < 3; ++j)
                ls[j] = plap_ball_eigenvalue({m, Rs[j], p}, tol).value;
              value = exp_three_point_limit(Rs, ls);
              note = "three-point tail";
            }
            return {{{"plap-limit", m.key, fmt_num(p), "inf", fmt_num(value), fmt_num(ref),
                      fmt_num(value / ref - 1.0), note}},
                    ""};
          });
    }
    run.series.push_back(std::move(ser));
  }
}

void cmd_clamped(const Options& o, Run& run) {
  run.table.columns = {"task", "metric", "l", "R", "mesh", "value", "reference", "margin", "note"};
  RadialMetric m = resolve_metric(run, o, "hyperbolic:n=2");
  std::vector<int> ls = o.l.empty() ? std::vector<int>{1} : o.l;
  std::vector<double> sched = schedule_or(o, {5, 10, 15, 20, 25, 30});
  double tol = o.tol > 0 ? o.tol : 1e-8;

  for (int l : ls) {
    double ref = std::pow(m.n / 2.0, 2 * l);
    Series ser{"l=" + std::to_string(l), {}};
    for (double R : sched) {
      run.current_task = "clamped l=" + std::to_string(l) + " R=" + fmt_num(R);
      rows_via_cache(
          run,
          "clamped|" + m.key + "|l=" + std::to_string(l) + "|R=" + c17(R) + "|mesh=" +
              std::to_string(o.mesh) + "|tol=" + c17(tol),
          [&]() -> std::pair<RowGroup, std::string> {
            EigenResult er = clamped_eigenvalue({m, R, l, o.mesh}, tol);
            return {{{"clamped", m.key, std::to_string(l), fmt_num(R),
                      std::to_string(er.mesh_size), fmt_num(er.value), fmt_num(ref),
                      fmt_num(er.value / ref - 1.0), ""}},
                    er.diagnostics};
          });
      ser.points.push_back({R, parse_cell(run.table.rows.back()[5])});
    }
    if (sched.size() >= 3) {
      run.current_task = "clamped-limit l=" + std::to_string(l);
      rows_via_cache(
          run,
          "clamped-limit|" + m.key + "|l=" + std::to_string(l) + "|R=" + c17_join(sched) +
              "|mesh=" + std::to_string(o.mesh) + "|tol=" + c17(tol),
          [&]() -> std::pair<RowGroup, std::string> {
            require_ah(m);
            double value;
            std::string note;
            if (sched.size() >= 4 && uniform_spacing(sched) && o.mesh == 0) {
              PolyharmLimit pl = polyharm_limit(m, l, sched, tol);
              value = pl.limit;
              note = "fit_quality=" + fmt_num(pl.fit_quality);
            } else {
              size_t i = sched.size() - 3;
              std::array<double, 3> Rs = {sched[i], sched[i + 1], sched[i + 2]};
              std::array<double, 3> vs;
              for (int j = 0; j < 3; ++j)
                vs[j] = clamped_eigenvalue({m, Rs[j], l, o.mesh}, tol).value;
              value = exp_three_point_limit(Rs, vs);
              note = "three-point tail";
            }
            return {{{"clamped-limit", m.key, std::to_string(l), "inf", "0", fmt_num(value),
                      fmt_num(ref), fmt_num(value / ref - 1.0), note}},
                    ""};
          });
    }
    run.series.push_back(std::move(ser));
  }
}

void cmd_buckling(const Options& o, Run& run) {
  run.table.columns = {"task", "metric", "R", "mesh", "value", "reference", "margin", "note"};
  RadialMetric m = resolve_metric(run, o, "hyperbolic:n=2");
  std::vector<double> sched = schedule_or(o, {5, 10, 15, 20, 25, 30});
  double tol = o.tol > 0 ? o.tol : 1e-8;
  double ref = m.n * m.n / 4.0;

  Series ser{"buckling", {}};
  for (double R : sched) {
    run.current_task = "buckling R=" + fmt_num(R);
    rows_via_cache(
        run,
        "buckling|" + m.key + "|R=" + c17(R) + "|mesh=" + std::to_string(o.mesh) + "|tol=" +
            c17(tol),
        [&]() -> std::pair<RowGroup, std::string> {
          EigenResult er = buckling_eigenvalue(m, R, o.mesh, tol);
          return {{{"buckling", m.key, fmt_num(R), std::to_string(er.mesh_size),
                    fmt_num(er.value), fmt_num(ref), fmt_num(er.value / ref - 1.0), ""}},
                  er.diagnostics};
        });
    ser.points.push_back({R, parse_cell(run.table.rows.back()[4])});
  }
  if (sched.size() >= 3) {
    run.current_task = "buckling-limit";
    rows_via_cache(
        run,
        "buckling-limit|" + m.key + "|R=" + c17_join(sched) + "|mesh=" + std::to_string(o.mesh) +
            "|tol=" + c17(tol),
        [&]() -> std::pair<RowGroup, std::string> {
          require_ah(m);
          double value;
          std::string note;
          if (sched.size() >= 4 && uniform_spacing(sched) && o.mesh == 0) {
            PolyharmLimit pl = polyharm_limit(m, 0, sched, tol);
            value = pl.limit;
            note = "fit_quality=" + fmt_num(pl.fit_quality);
          } else {
            size_t i = sched.size() - 3;
            std::array<double, 3> Rs = {sched[i], sched[i + 1], sched[i + 2]};
            std::array<double, 3> vs;
            for (int j = 0; j < 3; ++j) vs[j] = buckling_eigenvalue(m, Rs[j], o.mesh, tol).value;
            value = exp_three_point_limit(Rs, vs);
            note = "three-point tail";
          }
          return {{{"buckling-limit", m.key, "inf", "0", fmt_num(value), fmt_num(ref),
                    fmt_num(value / ref - 1.0), note}},
                  ""};
        });
  }
  run.series.push_back(std::move(ser));
}

void cmd_rayleigh_sweep(const Options& o, Run& run) {
  run.table.columns = {"s",
                       "eps",
                       "delta",
                       "l_or_B",
                       "numeric_quotient",
                       "formula_paper",
                       "formula_rederived"};
  RadialMetric m = resolve_metric(run, o, "hyperbolic-nf:n=2");
  std::vector<int> ls = o.l.empty() ? std::vector<int>{2, 3, 0} : o.l;
  std::vector<double> ss = o.s.empty() ? std::vector<double>{0.8, 0.9, 0.99} : o.s;
  std::vector<double> epss = o.eps.empty() ? std::vector<double>{1e-3} : o.eps;

  for (int l : ls) {
    std::string tag = l == 0 ? "B" : std::to_string(l);
    for (double s : ss) {
      Series ser{"l=" + tag + " s=" + fmt_num(s), {}};
      for (double eps : epss) {
        run.current_task = "rayleigh-sweep l=" + tag + " s=" + fmt_num(s) + " eps=" + fmt_num(eps);
        rows_via_cache(
            run,
            "rayleigh-sweep|" + m.key + "|l=" + tag + "|s=" + c17(s) + "|eps=" + c17(eps) +
                "|delta=" + c17(o.delta),
            [&]() -> std::pair<RowGroup, std::string> {
              CutoffParams cp;
              cp.s = s;
              cp.eps = eps;
              cp.delta = o.delta;
              double q = l == 0 ? rayleigh_buckling_numeric(m, cp)
                                : rayleigh_clamped_numeric(m, cp, l);
              double fp = l == 0 ? buckling_limit_formula(s, m.n, FormulaVariant::paper)
                                 : clamped_limit_formula(s, m.n, l, FormulaVariant::paper);
              double fr = l == 0 ? buckling_limit_formula(s, m.n, FormulaVariant::rederived)
                                 : clamped_limit_formula(s, m.n, l, FormulaVariant::rederived);
              return {{{fmt_num(s), fmt_num(eps), fmt_num(o.delta), tag, fmt_num(q), fmt_num(fp),
                        fmt_num(fr)}},
                      ""};
            });
        ser.points.push_back({eps, parse_cell(run.table.rows.back()[4])});
      }
      if (epss.size() >= 2) run.series.push_back(std::move(ser));
    }
  }
}

void cmd_expansions(const Options& o, Run& run) {
  run.table.columns = {"task", "metric", "check", "param", "s", "slope", "gate", "pass"};
  RadialMetric m = resolve_metric(run, o, "hyperbolic-nf:n=2");
  std::vector<double> ss = o.s.empty() ? std::vector<double>{0.6, 0.9, 1.2} : o.s;
  run.current_task = "expansions " + m.key;
  rows_via_cache(
      run, "expansions|" + m.key + "|s=" + c17_join(ss),
      [&]() -> std::pair<RowGroup, std::string> {
        RowGroup rows;
        auto add = [&](const char* check, const std::string& param, const std::string& s,
                       double slope, const std::string& gate) {
          rows.push_back({"expansions", m.key, check, param, s,
                          std::isinf(slope) ? "inf" : fmt_num(slope), gate, "1"});
        };
        for (int l : {1, 2, 3})
          add("delta-r", "l=" + std::to_string(l), "", check_delta_r_expansion(m, l).slope, "1.9");
        for (int mi : {0, 1, 2, 3})
          add("grad-delta-r", "m=" + std::to_string(mi), "", check_grad_delta_r(m, mi).slope,
              mi == 0 ? "exact" : "2.9");
        for (double s : ss)
          for (int mi : {0, 1, 2, 3}) {
            auto rs = check_rs_expansion(m, s, mi);
            add("rs-value", "m=" + std::to_string(mi), fmt_num(s), rs.value.slope,
                mi == 0 ? "exact" : fmt_num(s + 0.9));
            add("rs-gradient", "m=" + std::to_string(mi), fmt_num(s), rs.gradient.slope,
                mi == 0 ? "exact" : fmt_num(2 * s + 0.9));
          }
        return {rows, ""};
      });
}

void cmd_lee(const Options& o, Run& run) {
  run.table.columns = {"task", "metric", "check", "value", "target", "within", "pass"};
  RadialMetric m = resolve_metric(run, o, "hyperbolic-nf:n=2");
  int nodes = o.mesh > 0 ? o.mesh : 48;
  run.current_task = "lee " + m.key;
  rows_via_cache(
      run, "lee|" + m.key + "|nodes=" + std::to_string(nodes),
      [&]() -> std::pair<RowGroup, std::string> {
        LeeSolution sol = lee_solve(m, nodes);
        LeeChecks chk = lee_checks(m, sol);
        RowGroup rows;
        auto add = [&](const char* check, double value, double target, const char* within,
                       bool ok) {
          rows.push_back(
              {"lee", m.key, check, fmt_num(value), fmt_num(target), within, ok ? "1" : "0"});
        };
        add("residual", sol.residual, 1e-8, "le", sol.residual <= 1e-8);
        double uerr = 0.0;
        for (size_t i = 0; i < sol.grid.size(); ++i)
          uerr = std::max(uerr, std::abs(sol.u[i] - (1.0 / sol.grid[i] + sol.grid[i])));
        add("cosh-profile-max-error", uerr, 1e-8, "le", uerr <= 1e-8);
        double r0 = sol.grid.front();
        double bdy = std::abs(r0 * sol.u.front() - 1.0);
        add("boundary-normalization", bdy, 2 * r0 * r0, "le", bdy <= 2 * r0 * r0);
        add("gradient-estimate-min", chk.min_margin, 0.0, "gt", chk.min_margin > 0.0);
        double r2_target = boundary_data(m).scal_hat / (4.0 * m.n * (m.n - 1));
        add("r2-coefficient", sol.r2_coeff, r2_target, "rel-1e-2",
            std::abs(sol.r2_coeff - r2_target) <= 0.01 * std::abs(r2_target));
        add("boundary-limit", chk.boundary_limit, chk.target, "rel-1e-2",
            std::abs(chk.boundary_limit - chk.target) <= 0.01 * std::abs(chk.target));
        return {rows, "residual=" + fmt_num(sol.residual)};
      });
}

void cmd_poincare(const Options& o, Run& run) {
  run.table.columns = {"task", "metric", "seed", "p", "quotient", "bound", "margin", "pass"};
  RadialMetric m = resolve_metric(run, o, "hyperbolic:n=2");
  std::vector<double> ps = o.p.empty() ? std::vector<double>{1.5, 2.0, 3.0} : o.p;
  const int kBumps = 50;
  run.current_task = "poincare " + m.key;
  rows_via_cache(
      run, "poincare|" + m.key + "|seed=" + std::to_string(o.seed) + "|p=" + c17_join(ps),
      [&]() -> std::pair<RowGroup, std::string> {
        RowGroup rows;
        for (int i = 0; i < kBumps; ++i) {
          std::uint64_t seed = o.seed + std::uint64_t(i);
          double p = ps[size_t(i) % ps.size()];
          double bound = std::pow(m.n / p, p);
          double q = poincare_check(m, random_bump(seed), p);
          double margin = q / bound - 1.0;
          rows.push_back({"poincare", m.key, std::to_string(seed), fmt_num(p), fmt_num(q),
                          fmt_num(bound), fmt_num(margin), margin >= -1e-10 ? "1" : "0"});
        }
        return {rows, ""};
      });
}

void cmd_submanifold(const Options& o, Run& run) {
  run.table.columns = {"task",        "metric",     "kind",          "k",
                       "distance",    "beta",       "plap_bound",    "clamped_bound",
                       "buckling_bound"};
  RadialMetric m = resolve_metric(run, o, "hyperbolic-nf:n=2");
  double p = o.p.empty() ? 2.0 : o.p.front();
  std::vector<int> ks = o.l;
  if (ks.empty())
    for (int k = 1; k < m.n; ++k) ks.push_back(k);
  std::vector<double> ds = o.R.empty() ? std::vector<double>{0, 0.5, 1, 2} : o.R;
  int nodes = o.mesh > 0 ? o.mesh : 48;

  run.current_task = "submanifold " + m.key;
  rows_via_cache(
      run,
      "submanifold|" + m.key + "|k=" + [&] {
        std::string s;
        for (int k : ks) s += std::to_string(k) + ";";
        return s;
      }() + "|d=" + c17_join(ds) + "|p=" + c17(p) + "|nodes=" + std::to_string(nodes),
      [&]() -> std::pair<RowGroup, std::string> {
        LeeSolution sol = lee_solve(m, nodes);
        RowGroup rows;
        auto add = [&](const char* kind, int k, double d, double beta) {
          SubmanifoldBounds b = submanifold_lower_bounds(k, 0.0, beta, p, 2);
          rows.push_back({"submanifold", m.key, kind, std::to_string(k), fmt_num(d),
                          fmt_num(beta), fmt_num(b.plap), fmt_num(b.clamped),
                          fmt_num(b.buckling)});
        };
        for (int k : ks) {
          ModelSubmanifold tg{ModelSubmanifold::Kind::totally_geodesic, k, 0.0, m, 0.0};
          add("totally-geodesic", k, 0.0, submanifold_beta(tg, sol));
        }
        for (double d : ds) {
          ModelSubmanifold eq{ModelSubmanifold::Kind::equidistant, m.n - 1, d, m, 0.0};
          add("equidistant", m.n - 1, d, submanifold_beta(eq, sol));
        }
        return {rows, ""};
      });
}

void cmd_acceptance(const Options&, Run& run) {
  run.table.columns = acceptance_columns();
  for (int idx = 1; idx <= criterion_count(); ++idx) {
    run.current_task = "acceptance criterion " + std::to_string(idx);
    size_t first = run.table.rows.size();
    double secs = 0;
    bool cached = false;
    {
      auto t0 = std::chrono::steady_clock::now();
      rows_via_cache(run, "acceptance|criterion=" + std::to_string(idx),
                     [&]() -> std::pair<RowGroup, std::string> {
                       CriterionResult r = run_criterion(idx);
                       return {r.rows, r.detail};
                     });
      secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      cached = run.meta.back().cached;
    }
    bool ok = true;
    for (size_t i = first; i < run.table.rows.size(); ++i)
      ok = ok && run.table.rows[i].back() == "1";
    const std::string& name = run.table.rows[first][1];
    std::printf("criterion %2d  %-26s  %s  (%.2f s%s)\n", idx, name.c_str(),
                ok ? "PASS" : "FAIL", secs, cached ? ", cached" : "");
    if (!ok) run.failures.push_back("acceptance criterion " + std::to_string(idx) + " (" + name +
                                    ")");
  }
}

int dispatch(const std::string& cmd, const Options& o, Run& run) {
  if (cmd == "plap")
    cmd_plap(o, run);
  else if (cmd == "clamped")
    cmd_clamped(o, run);
  else if (cmd == "buckling")
    cmd_buckling(o, run);
  else if (cmd == "rayleigh-sweep")
    cmd_rayleigh_sweep(o, run);
  else if (cmd == "expansions")
    cmd_expansions(o, run);
  else if (cmd == "lee")
    cmd_lee(o, run);
  else if (cmd == "poincare")
    cmd_poincare(o, run);
  else if (cmd == "submanifold")
    cmd_submanifold(o, run);
  else if (cmd == "acceptance")
    cmd_acceptance(o, run);
  else
    fail(errc::config_error, "unknown task kind " + cmd);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first eigenvalues and sharp spectral bounds on asymptotically hyperbolic "
               "model manifolds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file; command-line values override");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  app.add_option("--metric", o.metric, "catalog metric key (default depends on the task)");
  app.add_option("--p", o.p, "p-Laplacian exponents, comma separated")->delimiter(',');
  app.add_option("--l", o.l,
                 "polyharmonic orders; 0 = buckling in sweeps; submanifold boundary dimensions")
      ->delimiter(',');
  app.add_option("--R", o.R, "radius schedule; equidistant offsets for submanifold")
      ->delimiter(',');
  app.add_option("--s", o.s, "boundary decay exponents, comma separated")->delimiter(',');
  app.add_option("--eps", o.eps, "cutoff scales, comma separated")->delimiter(',');
  app.add_option("--delta", o.delta, "inner cutoff band ratio");
  app.add_option("--tol", o.tol, "solver tolerance (0 = per-task default)");
  app.add_option("--mesh", o.mesh, "mesh elements / collocation nodes (0 = automatic)");
  app.add_option("--out", o.out, "output directory for results.csv/json/svg");
  app.add_option("--seed", o.seed, "base seed for the random suites");
  app.add_flag("--plots", o.plots, "emit results.svg with the raw data embedded");
  app.add_flag("--no-cache", o.no_cache, "bypass the result cache");

  app.add_subcommand("plap", "first Dirichlet p-eigenvalues on geodesic balls plus the limit");
  app.add_subcommand("clamped", "clamped polyharmonic eigenvalues plus the limit");
  app.add_subcommand("buckling", "buckling eigenvalues plus the limit");
  app.add_subcommand("rayleigh-sweep", "cutoff-family quotients against both formula variants");
  app.add_subcommand("expansions", "defining-function expansion order checks");
  app.add_subcommand("lee", "radial eigenfunction solve and gradient estimates");
  app.add_subcommand("poincare", "seeded random lower-bound suite for the Poincare quotient");
  app.add_subcommand("submanifold", "model submanifold invariants and eigenvalue bounds");
  app.add_subcommand("acceptance", "the full acceptance suite, one verdict line per criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  Run run;
  run.cache_enabled = !o.no_cache;
  try {
    dispatch(cmd, o, run);

    fs::path outdir(o.out);
    fs::create_directories(outdir);
    write_file(outdir / "results.csv", csv_text(run.table));
    write_file(outdir / "results.json", json_text(cmd, run.table, run.meta));
    if (o.plots && !run.series.empty())
      write_file(outdir / "results.svg",
                 svg_text(cmd + " (" + (o.metric.empty() ? "default metric" : o.metric) + ")",
                          cmd == "rayleigh-sweep" ? "eps" : "R", "value", run.series));
    std::cout << "wrote " << (outdir / "results.csv").string() << " (" << run.table.rows.size()
              << " rows)\n";
  } catch (const Error& e) {
    std::cerr << "ahspec: task '" << run.current_task << "' failed: " << e.what() << "\n";
    return e.code() == errc::config_error || e.code() == errc::not_in_catalog ? 2 : 1;
  }
  if (!run.failures.empty()) {
    for (const auto& f : run.failures)
      std::cerr << "ahspec: task '" << f << "' failed its contract\n";
    return 1;
  }
  return 0;
}
