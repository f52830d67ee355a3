#include "ahspec/geometry.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace ahspec {

namespace {

double sphere_area(int n) {
  // |S^n| = 2 pi^((n+1)/2) / Gamma((n+1)/2)
  return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

const NormalForm& as_normal_form(const RadialMetric& m, const char* op) {
  if (auto* nf = std::get_if<NormalForm>(&m.form)) return *nf;
  fail(errc::wrong_variant, std::string(op) + " requires a NormalForm metric");
}

}  // namespace

LaplacianCoeffs radial_laplacian_coeffs(const RadialMetric& m, double x) {
  TaylorXd a, b;
  radial_laplacian_jets(m, x, 0, a, b);
  return {a.value(), b.value()};
}

void radial_laplacian_jets(const RadialMetric& m, double x, int order, TaylorXd& a, TaylorXd& b) {
  if (auto* nf = std::get_if<NormalForm>(&m.form)) {
    if (!(x > 0) || !(x < nf->r_center))
      fail(errc::out_of_range, "normal-form coordinate r=" + std::to_string(x) +
                                   " outside (0, " + std::to_string(nf->r_center) + ")");
    TaylorXd r = TaylorXd::variable(x, order);
    TaylorXd c = nf->c.jet(x, order + 1);
    if (!(c.value() > 0))
      fail(errc::degenerate_metric, "c(r) <= 0 at r=" + std::to_string(x));
    a = (r * r).truncated(order);
    b = ((1.0 - m.n) * r + double(m.n) * r * r * (c.derivative() / c.truncated(order)))
            .truncated(order);
    return;
  }
  if (!(x > 0)) fail(errc::out_of_range, "geodesic coordinate must be positive");
  Curve phi = geodesic_warp(m);
  TaylorXd p = phi.jet(x, order + 1);
  if (!(p.value() > 0))
    fail(errc::degenerate_metric, "phi(t) <= 0 at t=" + std::to_string(x));
  a = TaylorXd::constant(1.0, x, order);
  b = (double(m.n) * (p.derivative() / p.truncated(order))).truncated(order);
}

Density density(const RadialMetric& m, double x) {
  const NormalForm& nf = as_normal_form(m, "density");
  if (!(x >= 0) || !(x < nf.r_center))
    fail(errc::out_of_range, "density: r outside [0, r_center)");
  double c = nf.c(x), c0 = nf.c(0.0);
  if (!(c > 0)) fail(errc::degenerate_metric, "c(r) <= 0 at r=" + std::to_string(x));
  return {std::pow(c / c0, m.n), m.n * nf.c.deriv(x, 1) / c};
}

BoundaryData boundary_data(const RadialMetric& m) {
  const NormalForm& nf = as_normal_form(m, "boundary_data");
  double c0 = nf.c(0.0);
  if (!(c0 > 0)) fail(errc::degenerate_metric, "c(0) <= 0");
  double radius = c0 * nf.rho0;
  BoundaryData bd;
  bd.vol_hat = std::pow(radius, m.n) * sphere_area(m.n);
  bd.scal_hat = m.n * (m.n - 1) / (radius * radius);
  // Trace convention: mean_curv is tr_ĝ of the shape operator of the r-level
  // sets at r=0, which the volume expansion ties to -n c'(0)/c(0).
  bd.mean_curv = -m.n * nf.c.deriv(0.0, 1) / c0;
  return bd;
}

Curve geodesic_warp(const RadialMetric& m) {
  if (auto* sf = std::get_if<SpaceForm>(&m.form)) return Curve::sinh_scaled(sf->kappa);
  if (auto* w = std::get_if<Warped>(&m.form)) return w->phi;
  const NormalForm& nf = std::get<NormalForm>(m.form);
  Curve c = nf.c;
  double rc = nf.r_center, rho0 = nf.rho0;
  return Curve([c, rc, rho0](double t, int order) {
    TaylorXd tv = TaylorXd::variable(t, order);
    TaylorXd r = rc * exp(-tv);
    TaylorXd cj = compose(c.jet(r.value(), order), r);
    return rho0 / rc * exp(tv) * cj;
  });
}

double normal_form_t_of_r(const RadialMetric& m, double r) {
  const NormalForm& nf = as_normal_form(m, "normal_form_t_of_r");
  if (!(r > 0) || !(r <= nf.r_center)) fail(errc::out_of_range, "r outside (0, r_center]");
  return std::log(nf.r_center / r);
}

double normal_form_r_of_t(const RadialMetric& m, double t) {
  const NormalForm& nf = as_normal_form(m, "normal_form_r_of_t");
  if (!(t >= 0)) fail(errc::out_of_range, "t must be nonnegative");
  return nf.r_center * std::exp(-t);
}

namespace {

struct KeyParts {
  std::string family;
  std::map<std::string, std::string> kv;
};

KeyParts parse_key(const std::string& key) {
  KeyParts out;
  std::stringstream ss(key);
  std::string tok;
  bool first = true;
  while (std::getline(ss, tok, ':')) {
    if (first) {
      out.family = tok;
      first = false;
      continue;
    }
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      fail(errc::config_error, "metric key token '" + tok + "' is not k=v");
    out.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (out.family.empty()) fail(errc::config_error, "empty metric key");
  return out;
}

double want_num(const KeyParts& p, const std::string& k) {
  auto it = p.kv.find(k);
  if (it == p.kv.end())
    fail(errc::config_error, "metric key '" + p.family + "' missing parameter '" + k + "'");
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(errc::config_error, "parameter '" + k + "' value '" + it->second + "' is not a number");
  }
}

int want_dim(const KeyParts& p) {
  double n = want_num(p, "n");
  if (n < 1 || n != std::floor(n) || n > 32)
    fail(errc::config_error, "boundary dimension n must be an integer in [1, 32]");
  return int(n);
}

void reject_unknown(const KeyParts& p, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : p.kv) {
    bool ok = false;
    for (const char* a : allowed)
      if (k == a) ok = true;
    if (!ok) fail(errc::config_error, "unknown metric parameter '" + k + "' in family '" +
                                          p.family + "'");
  }
}

Curve generic_nf_profile(double eta) {
  // (1 - r^2)/2 + eta r (1 - r^2)^2, coefficients ascending.
  Eigen::VectorXd c(6);
  c << 0.5, eta, -0.5, -2.0 * eta, 0.0, eta;
  return Curve::polynomial(c);
}

Curve spline_from_pts(const std::string& spec) {
  std::vector<double> xs{0.0}, ys{0.0};
  std::stringstream ss(spec);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    auto at = pair.find('@');
    if (at == std::string::npos)
      fail(errc::config_error, "spline point '" + pair + "' is not t@value");
    xs.push_back(std::stod(pair.substr(0, at)));
    ys.push_back(std::stod(pair.substr(at + 1)));
  }
  return Curve::cubic_spline(xs, ys);
}

}  // namespace

RadialMetric make_metric(const std::string& key) {
  KeyParts p = parse_key(key);
  RadialMetric m;
  m.key = key;
  if (p.family == "hyperbolic") {
    reject_unknown(p, {"n"});
    m.n = want_dim(p);
    m.form = SpaceForm{1.0};
  } else if (p.family == "spaceform") {
    reject_unknown(p, {"n", "kappa"});
    m.n = want_dim(p);
    double kappa = want_num(p, "kappa");
    if (kappa < 0) fail(errc::config_error, "kappa must be >= 0");
    m.form = SpaceForm{kappa};
  } else if (p.family == "euclidean") {
    reject_unknown(p, {"n"});
    m.n = want_dim(p);
    m.form = SpaceForm{0.0};
  } else if (p.family == "hyperbolic-nf") {
    reject_unknown(p, {"n"});
    m.n = want_dim(p);
    m.form = NormalForm{generic_nf_profile(0.0), 1.0, 1.0};
  } else if (p.family == "generic-nf") {
    reject_unknown(p, {"n", "eta"});
    m.n = want_dim(p);
    double eta = want_num(p, "eta");
    if (std::abs(eta) >= 0.25)
      fail(errc::config_error, "generic-nf requires |eta| < 0.25 to keep c positive");
    m.form = NormalForm{generic_nf_profile(eta), 1.0, 1.0};
  } else if (p.family == "warped") {
    auto it = p.kv.find("phi");
    if (it == p.kv.end()) fail(errc::config_error, "warped key missing phi=");
    if (it->second == "sinh+eps*t^3") {
      reject_unknown(p, {"n", "phi", "eps"});
      m.n = want_dim(p);
      m.form = Warped{Curve::sinh_plus_cubic(want_num(p, "eps"))};
    } else if (it->second == "sinh") {
      reject_unknown(p, {"n", "phi"});
      m.n = want_dim(p);
      m.form = Warped{Curve::sinh_scaled(1.0)};
    } else if (it->second == "spline") {
      reject_unknown(p, {"n", "phi", "pts"});
      m.n = want_dim(p);
      auto pts = p.kv.find("pts");
      if (pts == p.kv.end()) fail(errc::config_error, "phi=spline requires pts=");
      m.form = Warped{spline_from_pts(pts->second)};
    } else {
      fail(errc::config_error, "unknown warp profile '" + it->second + "'");
    }
  } else {
    fail(errc::not_in_catalog, "unknown metric family '" + p.family + "'");
  }
  return m;
}

void require_ah(const RadialMetric& m) {
  if (m.n < 1) fail(errc::degenerate_metric, "boundary dimension must be >= 1");
  if (auto* sf = std::get_if<SpaceForm>(&m.form)) {
    if (sf->kappa <= 0)
      fail(errc::degenerate_metric,
           "flat space form is not asymptotically hyperbolic; this operation requires kappa > 0");
  }
}

}  // namespace ahspec
