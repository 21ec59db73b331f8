#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace ebmforge {

// Central-difference gradient of a scalar function.
inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& point, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("central_difference: eps must be > 0");
  Eigen::VectorXd g(point.size());
  Eigen::VectorXd x = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    x[i] = point[i] + eps;
    double fp = f(x);
    x[i] = point[i] - eps;
    double fm = f(x);
    x[i] = point[i];
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("central_difference: non-finite f at perturbed point");
    g[i] = (fp - fm) / (2.0 * eps);
  }
  return g;
}

// Max over coordinates of |analytic - central difference| / (|analytic| + eps).
inline double finite_difference_check(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& point,
                                      const Eigen::VectorXd& analytic_grad, double eps) {
  Eigen::VectorXd fd = central_difference(f, point, eps);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    double err = std::abs(analytic_grad[i] - fd[i]) / (std::abs(analytic_grad[i]) + eps);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace ebmforge
