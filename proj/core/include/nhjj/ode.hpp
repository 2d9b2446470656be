#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhjj {

struct OdeTolerances {
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct step_underflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive Dormand-Prince 5(4) integration of dy/dt = rhs(t, y) for a
/// complex state vector, sampled exactly at the (increasing) grid times.
/// The first grid point is the initial time; the returned list contains the
/// state at every grid point, starting with y0 itself.
template <typename Rhs>
std::vector<Eigen::VectorXcd> integrate_to_grid(Rhs&& rhs, const Eigen::VectorXcd& y0,
                                                const std::vector<double>& t_grid,
                                                OdeTolerances tol = {}) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 4th-order embedded weights.
  static const double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                      e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

  if (t_grid.empty()) return {};
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("integrate_to_grid: t_grid must be strictly increasing");

  std::vector<Eigen::VectorXcd> out;
  out.reserve(t_grid.size());
  out.push_back(y0);

  Eigen::VectorXcd y = y0;
  double t = t_grid.front();
  Eigen::VectorXcd k1 = rhs(t, y);  // FSAL
  double h = 1e-4 * std::max(1.0, std::abs(t_grid.back() - t));

  auto err_norm = [&](const Eigen::VectorXcd& ynew, const Eigen::VectorXcd& err) {
    double acc = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = std::abs(err[i]) / sc;
      acc += e * e;
    }
    return std::sqrt(acc / std::max<Eigen::Index>(1, y.size()));
  };

  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    const double t_target = t_grid[g];
    while (t < t_target) {
      // Snap to the grid point when only roundoff of t remains.
      if (t_target - t <= 4e-16 * std::max({1.0, std::abs(t), std::abs(t_target)})) {
        t = t_target;
        break;
      }
      h = std::min(h, t_target - t);
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw step_underflow("integrate_to_grid: step size underflow at t = " +
                             std::to_string(t));
      const Eigen::VectorXcd k2 = rhs(t + c2 * h, y + h * (a21 * k1));
      const Eigen::VectorXcd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const Eigen::VectorXcd k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Eigen::VectorXcd k5 =
          rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Eigen::VectorXcd k6 =
          rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const Eigen::VectorXcd ynew =
          y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Eigen::VectorXcd k7 = rhs(t + h, ynew);
      const Eigen::VectorXcd yhat =
          y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double err = err_norm(ynew, ynew - yhat);
      if (err <= 1.0) {
        t += h;
        y = ynew;
        k1 = k7;
      }
      const double factor =
          err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
      h *= factor;
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace nhjj
