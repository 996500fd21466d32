#include "tollsafe/mixed_logit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tollsafe/error.hpp"
#include "tollsafe/optimizer.hpp"
#include "tollsafe/stats.hpp"

namespace tollsafe {

namespace {

// Packed layout of the free parameters: all free means, then all Θ entries,
// then the free Γ entries (diagonal first within each row).
struct Packing {
  std::vector<int> mean_index;                      // per coefficient, -1 when fixed at 0
  std::vector<std::vector<int>> theta_index;        // per coefficient, per hetero term
  std::vector<std::vector<int>> gamma_index;        // per random k, per column l<=k (-1 masked)
  std::vector<int> random_of_coef;                  // per coefficient, block index or -1
  std::size_t total = 0;

  explicit Packing(const ModelSpec& spec) {
    int next = 0;
    mean_index.resize(spec.coefficients.size(), -1);
    theta_index.resize(spec.coefficients.size());
    random_of_coef.resize(spec.coefficients.size(), -1);
    for (std::size_t m = 0; m < spec.coefficients.size(); ++m)
      if (!spec.coefficients[m].mean_fixed_zero) mean_index[m] = next++;
    for (std::size_t m = 0; m < spec.coefficients.size(); ++m)
      for (std::size_t t = 0; t < spec.coefficients[m].hetero_z.size(); ++t)
        theta_index[m].push_back(next++);
    int k = 0;
    for (std::size_t m = 0; m < spec.coefficients.size(); ++m)
      if (spec.coefficients[m].random) random_of_coef[m] = k++;
    gamma_index.resize(k);
    for (int row = 0; row < k; ++row) {
      gamma_index[row].assign(row + 1, -1);
      gamma_index[row][row] = next++;  // diagonal always free
      if (spec.correlated)
        for (int col = 0; col < row; ++col) gamma_index[row][col] = next++;
    }
    total = static_cast<std::size_t>(next);
  }
};

struct GroupedData {
  std::vector<std::vector<std::size_t>> groups;  // observation indices per group
};

// Groups keyed by sorted group id so that draw assignment does not depend
// on the order observations arrive in.
GroupedData group_observations(const ChoiceDataset& data) {
  std::map<std::string, std::vector<std::size_t>> by_id;
  for (std::size_t i = 0; i < data.observations.size(); ++i)
    by_id[data.observations[i].group_id].push_back(i);
  GroupedData g;
  g.groups.reserve(by_id.size());
  for (auto& [id, members] : by_id) g.groups.push_back(std::move(members));
  return g;
}

double xval(const CoefficientSpec& c, const ChoiceObservation& obs) {
  return c.covariate < 0 ? 1.0 : obs.x[static_cast<std::size_t>(c.covariate)];
}

}  // namespace

std::size_t ModelSpec::n_random() const {
  std::size_t k = 0;
  for (const auto& c : coefficients) k += c.random ? 1 : 0;
  return k;
}

std::size_t ModelSpec::n_cholesky_free() const {
  std::size_t k = n_random();
  return correlated ? k * (k + 1) / 2 : k;
}

std::size_t ModelSpec::parameter_count() const { return Packing(*this).total; }

std::vector<std::string> ModelSpec::parameter_names(const ChoiceDataset& data) const {
  Packing pack(*this);
  std::vector<std::string> names(pack.total);
  for (std::size_t m = 0; m < coefficients.size(); ++m) {
    if (pack.mean_index[m] >= 0) names[pack.mean_index[m]] = coefficients[m].name;
    for (std::size_t t = 0; t < coefficients[m].hetero_z.size(); ++t) {
      int z = coefficients[m].hetero_z[t];
      names[pack.theta_index[m][t]] =
          coefficients[m].name + ":mean~" + data.z_names.at(static_cast<std::size_t>(z));
    }
  }
  std::vector<std::string> random_names;
  for (const auto& c : coefficients)
    if (c.random) random_names.push_back(c.name);
  for (std::size_t row = 0; row < pack.gamma_index.size(); ++row)
    for (std::size_t col = 0; col <= row; ++col)
      if (pack.gamma_index[row][col] >= 0)
        names[pack.gamma_index[row][col]] =
            "gamma[" + random_names[row] + "," + random_names[col] + "]";
  return names;
}

void ModelSpec::validate(const ChoiceDataset& data) const {
  if (coefficients.empty()) throw config_error("ModelSpec: no coefficients");
  const int n_alt = static_cast<int>(data.n_alternatives());
  const int n_x = static_cast<int>(data.covariate_names.size());
  const int n_z = static_cast<int>(data.z_names.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& c : coefficients) {
    if (c.alternative < 1 || c.alternative >= n_alt)
      throw config_error("ModelSpec: coefficient '" + c.name +
                         "' targets an invalid alternative");
    if (c.covariate >= n_x)
      throw config_error("ModelSpec: coefficient '" + c.name +
                         "' references a missing covariate");
    if (c.mean_fixed_zero && !c.random)
      throw config_error("ModelSpec: coefficient '" + c.name +
                         "' has a fixed zero mean but is not random");
    if (!c.hetero_z.empty() && !c.random)
      throw config_error("ModelSpec: heterogeneity terms require a random coefficient ('" +
                         c.name + "')");
    for (int z : c.hetero_z)
      if (z < 0 || z >= n_z)
        throw config_error("ModelSpec: coefficient '" + c.name +
                           "' references a missing z covariate");
    if (!seen.insert({c.alternative, c.covariate}).second)
      throw config_error("ModelSpec: duplicate (alternative, covariate) term '" +
                         c.name + "'");
  }
  for (const auto& obs : data.observations) {
    if (obs.outcome < 0 || obs.outcome >= n_alt)
      throw data_error("ChoiceDataset: outcome out of range");
    if (static_cast<int>(obs.x.size()) != n_x || static_cast<int>(obs.z.size()) != n_z)
      throw data_error("DimensionMismatch: observation covariate length");
  }
  if (draws == 0) throw config_error("ModelSpec: draws must be positive");
}

Eigen::VectorXd mnl_probabilities(const Eigen::VectorXd& utilities) {
  for (Eigen::Index j = 0; j < utilities.size(); ++j)
    if (!std::isfinite(utilities[j]))
      throw internal_error("NonFiniteUtility in mnl_probabilities");
  double m = utilities.maxCoeff();
  Eigen::VectorXd e = (utilities.array() - m).exp();
  return e / e.sum();
}

Eigen::MatrixXd cholesky_from_params(const ModelSpec& spec, const Eigen::VectorXd& params) {
  Packing pack(spec);
  const std::size_t k = spec.n_random();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t row = 0; row < k; ++row)
    for (std::size_t col = 0; col <= row; ++col) {
      int idx = pack.gamma_index[row][col];
      if (idx < 0) continue;
      double v = params[idx];
      gamma(row, col) = row == col ? std::fabs(v) : v;
    }
  return gamma;
}

Eigen::VectorXd realize_coefficients(const ModelSpec& spec, const Eigen::VectorXd& params,
                                     const std::vector<double>& z,
                                     const Eigen::VectorXd& omega) {
  Packing pack(spec);
  if (static_cast<std::size_t>(params.size()) != pack.total)
    throw config_error("DimensionMismatch: parameter vector length");
  if (static_cast<std::size_t>(omega.size()) != spec.n_random())
    throw config_error("DimensionMismatch: omega length");
  Eigen::MatrixXd gamma = cholesky_from_params(spec, params);
  Eigen::VectorXd mix = gamma * omega;

  Eigen::VectorXd out(spec.coefficients.size());
  for (std::size_t m = 0; m < spec.coefficients.size(); ++m) {
    const auto& c = spec.coefficients[m];
    double v = pack.mean_index[m] >= 0 ? params[pack.mean_index[m]] : 0.0;
    for (std::size_t t = 0; t < c.hetero_z.size(); ++t)
      v += params[pack.theta_index[m][t]] * z.at(static_cast<std::size_t>(c.hetero_z[t]));
    if (pack.random_of_coef[m] >= 0) v += mix[pack.random_of_coef[m]];
    out[static_cast<Eigen::Index>(m)] = v;
  }
  return out;
}

double simulated_loglik(const ChoiceDataset& data, const ModelSpec& spec,
                        const Eigen::VectorXd& params, const HaltonNormal* halton,
                        Eigen::VectorXd* gradient) {
  Packing pack(spec);
  if (static_cast<std::size_t>(params.size()) != pack.total)
    throw config_error("DimensionMismatch: parameter vector length");
  const std::size_t n_coef = spec.coefficients.size();
  const std::size_t k_rand = spec.n_random();
  const std::size_t draws = k_rand > 0 ? spec.draws : 1;
  if (k_rand > 0) {
    if (!halton) throw config_error("simulated_loglik: random coefficients need draws");
    if (halton->dimensions() != k_rand || halton->draws() < draws)
      throw config_error("DimensionMismatch: draw generator shape");
  }
  const int n_alt = static_cast<int>(data.n_alternatives());
  const Eigen::MatrixXd gamma = cholesky_from_params(spec, params);

  GroupedData grouped = group_observations(data);

  // per-observation coefficient base: mean + Θ·z (draw independent)
  const std::size_t n_obs = data.observations.size();
  Eigen::MatrixXd base(n_coef, n_obs);
  Eigen::MatrixXd xv(n_coef, n_obs);
  for (std::size_t i = 0; i < n_obs; ++i) {
    const ChoiceObservation& obs = data.observations[i];
    for (std::size_t m = 0; m < n_coef; ++m) {
      const auto& c = spec.coefficients[m];
      double v = pack.mean_index[m] >= 0 ? params[pack.mean_index[m]] : 0.0;
      for (std::size_t t = 0; t < c.hetero_z.size(); ++t)
        v += params[pack.theta_index[m][t]] *
             obs.z[static_cast<std::size_t>(c.hetero_z[t])];
      base(m, i) = v;
      xv(m, i) = xval(c, obs);
    }
  }

  if (gradient) gradient->setZero(static_cast<Eigen::Index>(pack.total));

  double loglik = 0.0;
  Eigen::VectorXd utilities(n_alt), probs(n_alt);
  Eigen::VectorXd draw_ll(draws);
  Eigen::MatrixXd draw_grad;  // packed gradient of each draw's group log-prob
  if (gradient) draw_grad.resize(pack.total, draws);

  for (std::size_t g = 0; g < grouped.groups.size(); ++g) {
    const auto& members = grouped.groups[g];
    if (gradient) draw_grad.setZero();

    for (std::size_t r = 0; r < draws; ++r) {
      Eigen::VectorXd omega(k_rand), mix(k_rand);
      for (std::size_t d = 0; d < k_rand; ++d) omega[d] = halton->draw(g, r, d);
      if (k_rand > 0) mix = gamma * omega;

      double s = 0.0;
      for (std::size_t i : members) {
        const ChoiceObservation& obs = data.observations[i];
        utilities.setZero();
        for (std::size_t m = 0; m < n_coef; ++m) {
          double c = base(m, i);
          if (pack.random_of_coef[m] >= 0) c += mix[pack.random_of_coef[m]];
          utilities[spec.coefficients[m].alternative] += c * xv(m, i);
        }
        double umax = utilities.maxCoeff();
        double lse = umax + std::log((utilities.array() - umax).exp().sum());
        s += utilities[obs.outcome] - lse;

        if (gradient) {
          probs = (utilities.array() - lse).exp();
          for (std::size_t m = 0; m < n_coef; ++m) {
            int alt = spec.coefficients[m].alternative;
            double q = ((obs.outcome == alt ? 1.0 : 0.0) - probs[alt]) * xv(m, i);
            if (q == 0.0) continue;
            if (pack.mean_index[m] >= 0) draw_grad(pack.mean_index[m], r) += q;
            const auto& c = spec.coefficients[m];
            for (std::size_t t = 0; t < c.hetero_z.size(); ++t)
              draw_grad(pack.theta_index[m][t], r) +=
                  q * obs.z[static_cast<std::size_t>(c.hetero_z[t])];
            int k = pack.random_of_coef[m];
            if (k >= 0)
              for (int l = 0; l <= k; ++l) {
                int idx = pack.gamma_index[k][l];
                if (idx < 0) continue;
                double d = q * omega[l];
                if (l == k && params[idx] < 0.0) d = -d;  // |gamma| mapping
                draw_grad(idx, r) += d;
              }
          }
        }
      }
      draw_ll[static_cast<Eigen::Index>(r)] = s;
    }

    double m = draw_ll.maxCoeff();
    Eigen::VectorXd w = (draw_ll.array() - m).exp();
    double wsum = w.sum();
    loglik += m + std::log(wsum) - std::log(static_cast<double>(draws));
    if (gradient) *gradient += draw_grad * (w / wsum);
  }
  return loglik;
}

EstimationResult maximize(const ChoiceDataset& data, const ModelSpec& spec,
                          const EstimationOptions& options) {
  spec.validate(data);
  if (data.observations.empty()) throw data_error("Empty: no observations to fit");
  Packing pack(spec);
  const std::size_t k_rand = spec.n_random();

  HaltonNormal halton_storage(std::max<std::size_t>(k_rand, 1), spec.draws,
                              spec.halton_skip);
  const HaltonNormal* halton = k_rand > 0 ? &halton_storage : nullptr;

  OptimizerOptions opt;
  opt.max_iterations = options.max_iterations;
  opt.gradient_tolerance = options.gradient_tolerance;
  opt.relative_value_tolerance = options.relative_ll_tolerance;

  // stage 1: plain MNL start values for the means and Θ
  ModelSpec mnl = spec;
  for (auto& c : mnl.coefficients) {
    c.random = false;
    if (c.mean_fixed_zero) {
      c.mean_fixed_zero = false;  // free the mean for the startup fit
      c.hetero_z.clear();         // hetero terms require randomness
    }
    c.hetero_z.clear();
  }
  mnl.correlated = false;
  Packing mnl_pack(mnl);
  Eigen::VectorXd mnl_params = Eigen::VectorXd::Zero(mnl_pack.total);
  Objective mnl_obj = [&](const Eigen::VectorXd& p, Eigen::VectorXd& grad) {
    return simulated_loglik(data, mnl, p, nullptr, &grad);
  };
  bfgs_maximize(mnl_obj, mnl_params, opt);

  Eigen::VectorXd params = Eigen::VectorXd::Zero(pack.total);
  for (std::size_t m = 0; m < spec.coefficients.size(); ++m)
    if (pack.mean_index[m] >= 0 && mnl_pack.mean_index[m] >= 0)
      params[pack.mean_index[m]] = mnl_params[mnl_pack.mean_index[m]];
  for (std::size_t row = 0; row < k_rand; ++row)
    params[pack.gamma_index[row][row]] = 0.1;

  // stage 2: the full simulated likelihood
  Objective objective = [&](const Eigen::VectorXd& p, Eigen::VectorXd& grad) {
    return simulated_loglik(data, spec, p, halton, &grad);
  };
  OptimizerReport report = bfgs_maximize(objective, params, opt);
  if (!report.converged)
    throw convergence_error("NonConvergence: stopped after " +
                            std::to_string(report.iterations) +
                            " iterations (gradient max-norm " +
                            std::to_string(report.gradient_norm) + ")");

  EstimationResult result;
  result.parameter_names = spec.parameter_names(data);
  result.converged = true;
  result.iterations = report.iterations;
  result.loglik = report.value;
  result.n_observations = data.observations.size();
  result.n_groups = group_observations(data).groups.size();
  result.df = static_cast<int>(pack.total);
  result.loglik0 = -static_cast<double>(result.n_observations) *
                   std::log(static_cast<double>(data.n_alternatives()));
  FitMetrics fm = fit_metrics(result.loglik, result.loglik0, result.df);
  result.mcfadden_r2 = fm.mcfadden_r2;
  result.aic = fm.aic;

  result.estimates = params;
  for (std::size_t row = 0; row < k_rand; ++row) {
    int idx = pack.gamma_index[row][row];
    result.estimates[idx] = std::fabs(params[idx]);
  }
  result.cholesky = cholesky_from_params(spec, params);
  result.covariance = result.cholesky * result.cholesky.transpose();
  result.sigma = sigma_from_cholesky(result.cholesky);
  bool sigma_ok = k_rand > 0;
  for (double s : result.sigma) sigma_ok = sigma_ok && s > 0.0;
  if (sigma_ok) result.correlation = correlation_matrix(result.cholesky);

  result.std_errors = Eigen::VectorXd::Constant(
      params.size(), std::numeric_limits<double>::quiet_NaN());
  result.t_stats = result.std_errors;
  if (options.compute_standard_errors) {
    Eigen::MatrixXd hessian = numerical_hessian(objective, params);
    Eigen::MatrixXd info = -hessian;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      Eigen::MatrixXd cov =
          ldlt.solve(Eigen::MatrixXd::Identity(params.size(), params.size()));
      bool ok = true;
      for (Eigen::Index i = 0; i < params.size(); ++i)
        ok = ok && cov(i, i) > 0.0 && std::isfinite(cov(i, i));
      if (ok) {
        result.se_available = true;
        for (Eigen::Index i = 0; i < params.size(); ++i) {
          result.std_errors[i] = std::sqrt(cov(i, i));
          result.t_stats[i] = result.estimates[i] / result.std_errors[i];
        }
      }
    }
    if (!result.se_available)
      result.message = "SingularHessian: standard errors unavailable";
  }
  return result;
}

}  // namespace tollsafe
