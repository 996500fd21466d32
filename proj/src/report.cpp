#include "tollsafe/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tollsafe/error.hpp"
#include "tollsafe/stats.hpp"

namespace tollsafe {

std::string render_estimation_report(const EstimationResult& result,
                                     const std::string& title) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << title << "\n" << std::string(title.size(), '=') << "\n\n";

  auto row = [&](const std::string& name, double est, double t, bool have_t) {
    os << "  " << std::left << std::setw(40) << name << std::right << std::setw(10)
       << est;
    if (have_t)
      os << "  (" << std::setprecision(2) << t << ")" << std::setprecision(3);
    os << "\n";
  };

  // split the parameter list into the blocks of the reference table layout
  os << "Coefficients (t-statistics in parentheses)\n";
  for (std::size_t k = 0; k < result.parameter_names.size(); ++k) {
    const std::string& name = result.parameter_names[k];
    if (name.find(":mean~") != std::string::npos) continue;
    if (name.rfind("gamma[", 0) == 0) continue;
    row(name, result.estimates[k], result.t_stats[k], result.se_available);
  }

  bool any_hetero = false;
  for (const auto& n : result.parameter_names)
    any_hetero = any_hetero || n.find(":mean~") != std::string::npos;
  if (any_hetero) {
    os << "\nHeterogeneity in the means of the random parameters\n";
    for (std::size_t k = 0; k < result.parameter_names.size(); ++k) {
      const std::string& name = result.parameter_names[k];
      if (name.find(":mean~") == std::string::npos) continue;
      row(name, result.estimates[k], result.t_stats[k], result.se_available);
    }
  }

  if (!result.sigma.empty()) {
    os << "\nStandard deviation of the random parameters\n";
    std::vector<std::string> random_names;
    for (const auto& n : result.parameter_names) {
      if (n.rfind("gamma[", 0) != 0) continue;
      std::string inner = n.substr(6, n.size() - 7);
      std::string left = inner.substr(0, inner.find(','));
      std::string right = inner.substr(inner.find(',') + 1);
      if (left == right) random_names.push_back(left);
    }
    for (std::size_t k = 0; k < result.sigma.size(); ++k)
      os << "  " << std::left << std::setw(40)
         << ("sd(" + (k < random_names.size() ? random_names[k] : std::to_string(k)) + ")")
         << std::right << std::setw(10) << result.sigma[k] << "\n";

    os << "\nCholesky matrix\n";
    for (Eigen::Index i = 0; i < result.cholesky.rows(); ++i) {
      os << " ";
      for (Eigen::Index j = 0; j <= i; ++j)
        os << " " << std::setw(8) << result.cholesky(i, j);
      os << "\n";
    }
    if (result.correlation.size() > 0) {
      os << "\nCorrelation matrix\n";
      for (Eigen::Index i = 0; i < result.correlation.rows(); ++i) {
        os << " ";
        for (Eigen::Index j = 0; j < result.correlation.cols(); ++j)
          os << " " << std::setw(8) << result.correlation(i, j);
        os << "\n";
      }
    }
  }

  os << "\nModel statistics\n";
  os << "  Number of observations            " << result.n_observations << "\n";
  os << "  Number of groups                  " << result.n_groups << "\n";
  os << "  Number of parameters (df)         " << result.df << "\n";
  os << std::setprecision(2);
  os << "  Log-likelihood at zero (LL(0))    " << result.loglik0 << "\n";
  os << "  Log-likelihood at convergence     " << result.loglik << "\n";
  os << std::setprecision(3);
  os << "  McFadden R-squared                " << result.mcfadden_r2 << "\n";
  os << std::setprecision(1);
  os << "  AIC                               " << result.aic << "\n";
  if (!result.se_available) os << "  [standard errors unavailable: " << result.message
                               << "]\n";
  return os.str();
}

ModelComparison compare_results(const EstimationResult& restricted,
                                const EstimationResult& full, double aic_tolerance) {
  if (restricted.n_observations != full.n_observations)
    throw config_error("NonNested: models were fit on different observation counts");
  ModelComparison c;
  c.r2_a = restricted.mcfadden_r2;
  c.r2_b = full.mcfadden_r2;
  c.df_a = restricted.df;
  c.df_b = full.df;
  c.ll_a = restricted.loglik;
  c.ll_b = full.loglik;
  c.aic_a = restricted.aic;
  c.aic_b = full.aic;
  c.aic_a_recomputed = 2.0 * restricted.df - 2.0 * restricted.loglik;
  c.aic_b_recomputed = 2.0 * full.df - 2.0 * full.loglik;
  c.aic_a_consistent = std::fabs(c.aic_a - c.aic_a_recomputed) <= aic_tolerance;
  c.aic_b_consistent = std::fabs(c.aic_b - c.aic_b_recomputed) <= aic_tolerance;

  LrTestResult lr = lr_test(restricted.loglik, full.loglik,
                            std::max(1, full.df - restricted.df));
  c.lr_statistic = lr.statistic;
  c.lr_p_value = lr.p_value;
  c.negative_warning = lr.negative_warning;
  c.significant_1pct = !lr.negative_warning && lr.p_value < 0.01;
  return c;
}

std::string render_comparison(const ModelComparison& c) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "Model comparison (restricted vs full)\n";
  os << "  metric              restricted        full\n";
  os << "  McFadden R-squared  " << std::setw(10) << std::setprecision(3) << c.r2_a
     << "  " << std::setw(10) << c.r2_b << std::setprecision(2) << "\n";
  os << "  Parameters (df)     " << std::setw(10) << c.df_a << "  " << std::setw(10)
     << c.df_b << "\n";
  os << "  Log-likelihood      " << std::setw(10) << c.ll_a << "  " << std::setw(10)
     << c.ll_b << "\n";
  os << "  AIC                 " << std::setw(10) << std::setprecision(1) << c.aic_a
     << "  " << std::setw(10) << c.aic_b << std::setprecision(2) << "\n";
  os << "  LR chi-square       " << c.lr_statistic
     << (c.significant_1pct ? "*" : "") << " (p = " << std::setprecision(4)
     << c.lr_p_value << ")\n" << std::setprecision(2);
  os << "  * significant at the 1% level\n";
  if (c.negative_warning)
    os << "  WARNING: full model log-likelihood is below the restricted model's\n";
  if (!c.aic_a_consistent)
    os << "  FLAG: restricted AIC " << std::setprecision(1) << c.aic_a
       << " disagrees with 2*df - 2*LL = " << c.aic_a_recomputed << "\n";
  if (!c.aic_b_consistent)
    os << "  FLAG: full AIC " << std::setprecision(1) << c.aic_b
       << " disagrees with 2*df - 2*LL = " << c.aic_b_recomputed << "\n";
  return os.str();
}

void save_comparison(const ModelComparison& c, const std::string& path) {
  nlohmann::json j;
  j["r2"] = {c.r2_a, c.r2_b};
  j["df"] = {c.df_a, c.df_b};
  j["loglik"] = {c.ll_a, c.ll_b};
  j["aic"] = {c.aic_a, c.aic_b};
  j["aic_recomputed"] = {c.aic_a_recomputed, c.aic_b_recomputed};
  j["aic_consistent"] = {c.aic_a_consistent, c.aic_b_consistent};
  j["lr_statistic"] = c.lr_statistic;
  j["lr_p_value"] = c.lr_p_value;
  j["significant_1pct"] = c.significant_1pct;
  j["negative_warning"] = c.negative_warning;
  std::ofstream out(path);
  if (!out) throw data_error("cannot write comparison: " + path);
  out << j.dump(2) << "\n";
}

void write_trajectory_polylines(const std::vector<VehicleTrack>& tracks,
                                const std::string& path) {
  if (tracks.empty()) throw data_error("Empty: no tracks to plot");
  std::ofstream out(path);
  if (!out) throw data_error("cannot write plot data: " + path);
  out << std::setprecision(10);
  std::map<Payment, std::vector<const VehicleTrack*>> by_payment;
  for (const auto& t : tracks) by_payment[t.payment].push_back(&t);
  for (const auto& [payment, members] : by_payment) {
    out << "# payment=" << to_string(payment) << "\n";
    for (const VehicleTrack* t : members) {
      out << "# vehicle=" << t->vehicle_id << " class=" << to_string(t->vclass) << "\n";
      for (const auto& f : t->frames) out << f.x << ',' << f.y << "\n";
      out << "\n";
    }
  }
}

void write_ttc_histogram(const std::vector<InteractionObservation>& observations,
                         const std::string& path, double bin_width) {
  if (observations.empty()) throw data_error("Empty: no observations to plot");
  if (bin_width <= 0.0) throw config_error("histogram bin width must be positive");
  std::ofstream out(path);
  if (!out) throw data_error("cannot write plot data: " + path);

  double max_finite = 0.0;
  std::size_t infinite = 0;
  for (const auto& o : observations) {
    if (std::isfinite(o.ttc))
      max_finite = std::max(max_finite, o.ttc);
    else
      ++infinite;
  }
  std::size_t bins = static_cast<std::size_t>(std::floor(max_finite / bin_width)) + 1;
  std::vector<std::size_t> counts(bins, 0);
  for (const auto& o : observations)
    if (std::isfinite(o.ttc))
      counts[static_cast<std::size_t>(std::floor(o.ttc / bin_width))]++;

  out << "bin_low,bin_high,count\n" << std::setprecision(10);
  for (std::size_t b = 0; b < bins; ++b)
    out << b * bin_width << ',' << (b + 1) * bin_width << ',' << counts[b] << "\n";
  out << "inf,inf," << infinite << "\n";
}

}  // namespace tollsafe
