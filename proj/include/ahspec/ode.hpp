#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "ahspec/errors.hpp"

namespace ahspec {

// Dormand-Prince 5(4) with PI step control.  One fixed-size template so the
// two- and three-component radial systems compile to straight-line code.
template <int N>
class OdeStepper {
 public:
  using Vec = Eigen::Matrix<double, N, 1>;
  using Rhs = std::function<void(double, const Vec&, Vec&)>;

  OdeStepper(Rhs rhs, double rel_tol, double abs_tol)
      : rhs_(std::move(rhs)), rtol_(rel_tol), atol_(abs_tol) {}

  // Advance y from t0 to t1.  If stop is given, integration halts at the
  // first step end where stop(t, y) is true; the caller refines from the
  // state before that step.
  struct StepOut {
    double t;
    Vec y;
    bool stopped;
    double t_before;
    Vec y_before;
  };

  StepOut integrate(double t0, const Vec& y0, double t1,
                    const std::function<bool(double, const Vec&)>& stop = {}) const {
    double t = t0;
    Vec y = y0;
    double h = std::min(1e-3, t1 - t0);
    Vec k1;
    rhs_(t, y, k1);
    int rejects_in_row = 0;
    while (t < t1) {
      h = std::min(h, t1 - t);
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        fail(errc::stiff_failure, "step size underflow at t=" + std::to_string(t));
      Vec y5, err;
      Vec k7 = step(t, y, k1, h, y5, err);
      double sc = 0;
      for (int i = 0; i < N; ++i) {
        double s = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
        sc = std::max(sc, std::abs(err[i]) / s);
      }
      if (sc <= 1.0) {
        double t_before = t;
        Vec y_before = y;
        t += h;
        y = y5;
        k1 = k7;  // FSAL
        rejects_in_row = 0;
        if (stop && stop(t, y)) return {t, y, true, t_before, y_before};
        h *= std::min(5.0, 0.9 * std::pow(std::max(sc, 1e-10), -0.2));
      } else {
        h *= std::max(0.1, 0.9 * std::pow(sc, -0.2));
        if (++rejects_in_row > 60)
          fail(errc::stiff_failure, "60 consecutive step rejections at t=" + std::to_string(t));
      }
    }
    return {t, y, false, t, y};
  }

 private:
  // One Dormand-Prince step; returns k7 for FSAL reuse.
  Vec step(double t, const Vec& y, const Vec& k1, double h, Vec& y5, Vec& err) const {
    Vec k2, k3, k4, k5, k6, k7, tmp;
    tmp = y + h * (a21 * k1);
    rhs_(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs_(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs_(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs_(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs_(t + h, tmp, k6);
    y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs_(t + h, y5, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return k7;
  }

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  Rhs rhs_;
  double rtol_, atol_;
};

}  // namespace ahspec
