#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace tollsafe {

/// Row-wise Euclidean norms of a lower-triangular Cholesky factor: the
/// standard deviation of each correlated random coefficient.
std::vector<double> sigma_from_cholesky(const Eigen::MatrixXd& gamma);

/// Correlation matrix implied by C = ΓΓᵀ. Throws (Internal) when a row of Γ
/// is entirely zero.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& gamma);

/// t-statistic of a random-coefficient standard deviation: SE = S/√N,
/// t = σ/SE, with S the sample SD of the associated covariate.
double sigma_t_stat(double sigma, double sample_sd, std::size_t n);

struct LrTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int df = 0;
  bool negative_warning = false;  // full model fit below the restricted one
};

/// Likelihood-ratio test X² = −2(LL_restricted − LL_full) against a
/// chi-square with df_diff degrees of freedom.
LrTestResult lr_test(double ll_restricted, double ll_full, int df_diff);

struct FitMetrics {
  double mcfadden_r2 = 0.0;
  double aic = 0.0;
};

/// McFadden R² = 1 − LL/LL0 and AIC = 2·df − 2·LL.
FitMetrics fit_metrics(double ll, double ll0, int df);

}  // namespace tollsafe
