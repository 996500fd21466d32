#pragma once

#include <string>
#include <vector>

#include "tollsafe/mixed_logit.hpp"
#include "tollsafe/observations.hpp"
#include "tollsafe/trajectory.hpp"

namespace tollsafe {

/// Human-readable estimation report: coefficient table with t-statistics,
/// the standard-deviation and heterogeneity-in-means blocks, Cholesky and
/// correlation matrices, and the model statistics block.
std::string render_estimation_report(const EstimationResult& result,
                                     const std::string& title = "Model estimates");

struct ModelComparison {
  // restricted (a) vs full (b)
  double r2_a = 0.0, r2_b = 0.0;
  int df_a = 0, df_b = 0;
  double ll_a = 0.0, ll_b = 0.0;
  double aic_a = 0.0, aic_b = 0.0;
  double lr_statistic = 0.0;
  double lr_p_value = 1.0;
  bool significant_1pct = false;
  bool negative_warning = false;       // full model fits worse
  // AIC consistency: stored AIC vs 2·df − 2·LL recomputed from the result
  bool aic_a_consistent = true;
  bool aic_b_consistent = true;
  double aic_a_recomputed = 0.0, aic_b_recomputed = 0.0;
};

/// Side-by-side comparison of a restricted and a full model fit on the same
/// data. Stored AIC values that disagree with 2·df − 2·LL by more than the
/// tolerance are flagged, never corrected.
ModelComparison compare_results(const EstimationResult& restricted,
                                const EstimationResult& full,
                                double aic_tolerance = 0.05);

std::string render_comparison(const ModelComparison& c);
void save_comparison(const ModelComparison& c, const std::string& path);  // JSON

/// Plot data: trajectory polylines, one section per payment type, points as
/// "x,y" rows with blank lines between vehicles (gnuplot-style blocks).
void write_trajectory_polylines(const std::vector<VehicleTrack>& tracks,
                                const std::string& path);

/// Plot data: TTC histogram of the finite TTCs, fixed-width bins.
/// Columns: bin_low,bin_high,count; a trailing "inf" row counts the rest.
void write_ttc_histogram(const std::vector<InteractionObservation>& observations,
                         const std::string& path, double bin_width = 0.5);

}  // namespace tollsafe
