#include "tollsafe/stats.hpp"

#include <cmath>

#include "tollsafe/error.hpp"
#include "tollsafe/special_functions.hpp"

namespace tollsafe {

std::vector<double> sigma_from_cholesky(const Eigen::MatrixXd& gamma) {
  std::vector<double> sigma(gamma.rows());
  for (Eigen::Index k = 0; k < gamma.rows(); ++k)
    sigma[k] = gamma.row(k).head(k + 1).norm();
  return sigma;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& gamma) {
  Eigen::MatrixXd c = gamma * gamma.transpose();
  auto sigma = sigma_from_cholesky(gamma);
  Eigen::MatrixXd cor(c.rows(), c.cols());
  for (Eigen::Index p = 0; p < c.rows(); ++p) {
    if (sigma[p] == 0.0)
      throw internal_error("ZeroSigma: random coefficient " + std::to_string(p) +
                           " has zero standard deviation");
    for (Eigen::Index q = 0; q < c.cols(); ++q)
      cor(p, q) = c(p, q) / (sigma[p] * sigma[q]);
  }
  return cor;
}

double sigma_t_stat(double sigma, double sample_sd, std::size_t n) {
  if (n == 0 || sample_sd <= 0.0)
    throw internal_error("sigma_t_stat: requires N > 0 and S > 0");
  double se = sample_sd / std::sqrt(static_cast<double>(n));
  return sigma / se;
}

LrTestResult lr_test(double ll_restricted, double ll_full, int df_diff) {
  LrTestResult r;
  r.df = df_diff;
  r.statistic = -2.0 * (ll_restricted - ll_full) + 0.0;  // avoid -0.0
  if (r.statistic < 0.0) {
    r.negative_warning = true;
    r.p_value = 1.0;
    return r;
  }
  r.p_value = chi_square_sf(r.statistic, df_diff);
  return r;
}

FitMetrics fit_metrics(double ll, double ll0, int df) {
  if (ll0 >= 0.0) throw internal_error("fit_metrics: LL0 must be negative");
  FitMetrics m;
  m.mcfadden_r2 = 1.0 - ll / ll0;
  m.aic = 2.0 * df - 2.0 * ll;
  return m;
}

}  // namespace tollsafe
