#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tollsafe/halton.hpp"

namespace tollsafe {

/// One choice observation: outcome index (0 = reference "none", 1 = slight,
/// 2 = severe), utility covariates x, and mean-shift covariates z.
struct ChoiceObservation {
  std::string group_id;
  int outcome = 0;
  std::vector<double> x;
  std::vector<double> z;
};

struct ChoiceDataset {
  std::vector<std::string> alternatives = {"none", "slight", "severe"};
  std::vector<std::string> covariate_names;  // names of the x entries
  std::vector<std::string> z_names;          // names of the z entries
  std::vector<ChoiceObservation> observations;

  std::size_t n_alternatives() const { return alternatives.size(); }
};

/// One utility coefficient. `alternative` indexes the non-reference
/// alternative whose utility the term enters (reference utilities are all
/// zero). `covariate` indexes x, or -1 for a constant. Random coefficients
/// belong to the correlated block in declaration order; `hetero_z` lists the
/// z covariates shifting this coefficient's mean (the Θ row).
struct CoefficientSpec {
  std::string name;
  int alternative = 1;
  int covariate = -1;
  bool random = false;
  bool mean_fixed_zero = false;  // estimate heterogeneity around a zero mean
  std::vector<int> hetero_z;
};

struct ModelSpec {
  std::vector<CoefficientSpec> coefficients;
  bool correlated = false;  // full lower triangle free vs diagonal-only Γ
  std::size_t draws = 1000;
  std::size_t halton_skip = 100;

  std::size_t n_random() const;
  /// Free entries of Γ: the diagonal always, plus the sub-diagonal lower
  /// triangle when `correlated`.
  std::size_t n_cholesky_free() const;
  /// Total packed parameter count: free means, Θ entries, Γ entries.
  std::size_t parameter_count() const;
  /// Human-readable packed parameter names, in packing order.
  std::vector<std::string> parameter_names(const ChoiceDataset& data) const;
  void validate(const ChoiceDataset& data) const;
};

/// Softmax over per-alternative utilities (reference utility included).
Eigen::VectorXd mnl_probabilities(const Eigen::VectorXd& utilities);

/// Unpack the lower-triangular Γ from a packed parameter vector. Diagonal
/// entries are stored unconstrained and mapped through absolute value.
Eigen::MatrixXd cholesky_from_params(const ModelSpec& spec, const Eigen::VectorXd& params);

/// Realized coefficient vector (one entry per CoefficientSpec) for an
/// observation with mean-shift covariates z and standard-normal draw omega.
Eigen::VectorXd realize_coefficients(const ModelSpec& spec, const Eigen::VectorXd& params,
                                     const std::vector<double>& z,
                                     const Eigen::VectorXd& omega);

/// Simulated panel log-likelihood: per group, the log of the draw-average of
/// the product of within-group outcome probabilities (log-sum-exp over
/// draws). With no random coefficients this is the plain MNL log-likelihood.
/// When `gradient` is non-null it receives the analytic gradient with
/// respect to the packed parameters.
double simulated_loglik(const ChoiceDataset& data, const ModelSpec& spec,
                        const Eigen::VectorXd& params, const HaltonNormal* halton,
                        Eigen::VectorXd* gradient = nullptr);

struct EstimationOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-5;
  double relative_ll_tolerance = 1e-9;
  bool compute_standard_errors = true;
};

struct EstimationResult {
  std::vector<std::string> parameter_names;
  Eigen::VectorXd estimates;    // Γ diagonal reported as its positive value
  Eigen::VectorXd std_errors;   // NaN when the Hessian is singular
  Eigen::VectorXd t_stats;
  double loglik = 0.0;
  double loglik0 = 0.0;  // equal-shares null
  double mcfadden_r2 = 0.0;
  double aic = 0.0;
  int df = 0;
  std::size_t n_observations = 0;
  std::size_t n_groups = 0;
  Eigen::MatrixXd cholesky;     // lower-triangular Γ at the optimum
  Eigen::MatrixXd covariance;   // ΓΓᵀ
  Eigen::MatrixXd correlation;
  std::vector<double> sigma;    // row norms of Γ
  bool converged = false;
  int iterations = 0;
  bool se_available = false;
  std::string message;
};

/// Fit by simulated maximum likelihood: MNL means as starting values, 0.1 on
/// the Γ diagonal, BFGS ascent, standard errors from the inverse numerical
/// Hessian of the analytic gradient. Throws (Convergence) at the iteration
/// cap.
EstimationResult maximize(const ChoiceDataset& data, const ModelSpec& spec,
                          const EstimationOptions& options = {});

}  // namespace tollsafe
