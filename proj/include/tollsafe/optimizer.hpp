#pragma once

#include <Eigen/Dense>
#include <functional>

namespace tollsafe {

struct OptimizerOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-5;   // max-norm of the gradient
  double relative_value_tolerance = 1e-9;
};

struct OptimizerReport {
  bool converged = false;
  int iterations = 0;
  double value = 0.0;
  double gradient_norm = 0.0;
};

/// Objective callback: returns the value at x and fills the gradient.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// BFGS ascent with backtracking line search. `x` holds the start point and
/// is updated in place to the maximizer found.
OptimizerReport bfgs_maximize(const Objective& f, Eigen::VectorXd& x,
                              const OptimizerOptions& options = {});

/// Hessian of a scalar function from central differences of its gradient.
Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x,
                                  double step = 1e-5);

}  // namespace tollsafe
