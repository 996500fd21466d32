#include "tollsafe/optimizer.hpp"

#include <cmath>

#include "tollsafe/error.hpp"

namespace tollsafe {

OptimizerReport bfgs_maximize(const Objective& f, Eigen::VectorXd& x,
                              const OptimizerOptions& options) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);  // inverse Hessian of -f
  Eigen::VectorXd grad(n);
  double value = f(x, grad);
  if (!std::isfinite(value))
    throw internal_error("bfgs_maximize: non-finite objective at the start point");

  OptimizerReport report;
  report.value = value;
  report.gradient_norm = grad.lpNorm<Eigen::Infinity>();

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (report.gradient_norm < options.gradient_tolerance) {
      report.converged = true;
      return report;
    }

    Eigen::VectorXd direction = h_inv * grad;  // ascent direction
    double slope = grad.dot(direction);
    if (slope <= 0.0) {  // curvature lost; restart from steepest ascent
      h_inv.setIdentity();
      direction = grad;
      slope = grad.squaredNorm();
    }

    // backtracking Armijo line search
    double step = 1.0;
    Eigen::VectorXd x_new(n), grad_new(n);
    double value_new = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * direction;
      value_new = f(x_new, grad_new);
      if (std::isfinite(value_new) && value_new >= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // no uphill step found along the direction: treat as converged if the
      // gradient is already tiny, otherwise report failure
      report.iterations = iter + 1;
      report.converged = report.gradient_norm < 1e-3;
      return report;
    }

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = grad - grad_new;  // change of the gradient of -f is -(grad_new-grad)
    double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      // BFGS update of the inverse Hessian of the negated objective
      Eigen::VectorXd hy = h_inv * y;
      double yhy = y.dot(hy);
      h_inv += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
               (hy * s.transpose() + s * hy.transpose()) / sy;
    }

    double rel_change = std::fabs(value_new - value) /
                        std::max(1.0, std::fabs(value_new));
    x = x_new;
    grad = grad_new;
    value = value_new;
    report.value = value;
    report.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    report.iterations = iter + 1;

    if (rel_change < options.relative_value_tolerance &&
        report.gradient_norm < options.gradient_tolerance) {
      report.converged = true;
      return report;
    }
    if (rel_change < options.relative_value_tolerance && iter > 0) {
      // value has stalled; accept if the gradient is near tolerance
      if (report.gradient_norm < 10.0 * options.gradient_tolerance) {
        report.converged = true;
        return report;
      }
    }
  }
  return report;  // iteration cap, converged = false
}

Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x,
                                  double step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd hessian(n, n);
  Eigen::VectorXd xp = x, grad_plus(n), grad_minus(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double h = step * std::max(1.0, std::fabs(x[k]));
    xp[k] = x[k] + h;
    f(xp, grad_plus);
    xp[k] = x[k] - h;
    f(xp, grad_minus);
    xp[k] = x[k];
    hessian.col(k) = (grad_plus - grad_minus) / (2.0 * h);
  }
  return 0.5 * (hessian + hessian.transpose());  // symmetrize
}

}  // namespace tollsafe
