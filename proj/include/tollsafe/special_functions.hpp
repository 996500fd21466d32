#pragma once

namespace tollsafe {

/// Inverse of the standard normal CDF (quantile function). Accurate to
/// roughly 1e-9 relative error over (0, 1); throws (Internal) outside.
double inverse_normal_cdf(double p);

/// Regularized lower incomplete gamma function P(a, x).
double regularized_gamma_p(double a, double x);

/// Upper-tail p-value of a chi-square statistic with `df` degrees of freedom.
double chi_square_sf(double x, int df);

}  // namespace tollsafe
