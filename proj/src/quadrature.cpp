#include "ahspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace ahspec {
namespace {

// 7-15 Gauss-Kronrod pair on [-1, 1].  Positive abscissae; even indices are
// Kronrod-only nodes, odd indices the embedded Gauss-7 nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, err;
  bool operator<(const Interval& o) const {
    if (err != o.err) return err < o.err;
    return a > o.a;  // deterministic tie-break
  }
};

Interval gk15(const std::function<double(double)>& f, double a, double b, int& evals) {
  double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double resg = 0, resk = 0;
  auto eval = [&](double x) {
    double v = f(x);
    ++evals;
    if (!std::isfinite(v)) fail(errc::nonfinite_integrand, "integrand non-finite at x=" + std::to_string(x));
    return v;
  };
  double fc = eval(c);
  resk = kWgk[7] * fc;
  resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    double fv = eval(c - h * kXgk[j]) + eval(c + h * kXgk[j]);
    resk += kWgk[j] * fv;
    if (j % 2 == 1) resg += kWg[j / 2] * fv;
  }
  return {a, b, resk * h, std::abs(resk - resg) * std::abs(h)};
}

QuadResult adapt(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 int max_subdivisions) {
  int evals = 0;
  std::priority_queue<Interval> heap;
  Interval whole = gk15(f, a, b, evals);
  double total = whole.value, toterr = whole.err;
  heap.push(whole);
  int subs = 0;
  while (toterr > std::max(rel_tol * std::abs(total), 1e-15 * (1.0 + std::abs(total)))) {
    if (subs >= max_subdivisions)
      fail(errc::max_subdivisions, "quad_adaptive exceeded " + std::to_string(max_subdivisions) +
                                       " subdivisions, err_est=" + num_str(toterr));
    Interval worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
      fail(errc::max_subdivisions, "interval collapsed below machine resolution");
    Interval left = gk15(f, worst.a, mid, evals);
    Interval right = gk15(f, mid, worst.b, evals);
    total += left.value + right.value - worst.value;
    toterr += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++subs;
  }
  return {total, toterr, evals, subs};
}

// x = a + u^k (or b - u^k) maps u in [0, (b-a)^(1/k)] onto [a, b] and turns
// an endpoint factor |x - end|^alpha into u^(k(alpha+1)-1); k is chosen so
// that power is >= 2.  When u^k rounds away entirely the transformed
// integrand is 0 to working precision, which the guard returns instead of
// evaluating f at the singular endpoint itself.
std::function<double(double)> desingularize(std::function<double(double)> f, double endpoint,
                                            double direction, int k) {
  return [f = std::move(f), endpoint, direction, k](double u) {
    double uk1 = std::pow(u, k - 1);
    double x = endpoint + direction * (uk1 * u);
    if (x == endpoint) return 0.0;
    return f(x) * double(k) * uk1;
  };
}

int power_order(double alpha) {
  if (alpha <= -1.0)
    fail(errc::out_of_range, "endpoint exponent " + std::to_string(alpha) + " is not integrable");
  if (alpha >= 0 && alpha == std::floor(alpha)) return 1;
  return std::max(2, int(std::ceil(3.0 / (alpha + 1.0))));
}

}  // namespace

QuadResult quad_adaptive(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, std::optional<EndpointPower> left_hint,
                         std::optional<EndpointPower> right_hint, int max_subdivisions) {
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0, 0};
    fail(errc::out_of_range, "quad_adaptive needs a <= b");
  }
  if (left_hint && right_hint) {
    double mid = 0.5 * (a + b);
    QuadResult l = quad_adaptive(f, a, mid, rel_tol, left_hint, std::nullopt, max_subdivisions);
    QuadResult r = quad_adaptive(f, mid, b, rel_tol, std::nullopt, right_hint, max_subdivisions);
    return {l.value + r.value, l.err_est + r.err_est, l.evals + r.evals,
            l.subdivisions + r.subdivisions};
  }
  if (right_hint) {
    int k = power_order(right_hint->exponent);
    if (k == 1) return adapt(f, a, b, rel_tol, max_subdivisions);
    return adapt(desingularize(f, b, -1.0, k), 0.0, std::pow(b - a, 1.0 / k), rel_tol,
                 max_subdivisions);
  }
  if (left_hint) {
    int k = power_order(left_hint->exponent);
    if (k == 1) return adapt(f, a, b, rel_tol, max_subdivisions);
    return adapt(desingularize(f, a, 1.0, k), 0.0, std::pow(b - a, 1.0 / k), rel_tol,
                 max_subdivisions);
  }
  return adapt(f, a, b, rel_tol, max_subdivisions);
}

void gauss_legendre(int npts, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(npts);
  weights.resize(npts);
  // Newton iteration on P_n from the three-term recurrence; symmetric rule,
  // compute half and reflect.
  for (int i = 0; i < (npts + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= npts; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = npts * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nodes[i] = -x;
    nodes[npts - 1 - i] = x;
    weights[i] = w;
    weights[npts - 1 - i] = w;
  }
  double h = 0.5 * (b - a), c = 0.5 * (a + b);
  for (int i = 0; i < npts; ++i) {
    nodes[i] = c + h * nodes[i];
    weights[i] *= h;
  }
}

}  // namespace ahspec
