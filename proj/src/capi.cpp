#include "tollsafe/capi.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "tollsafe/error.hpp"
#include "tollsafe/kernel.hpp"
#include "tollsafe/model_io.hpp"
#include "tollsafe/observations.hpp"
#include "tollsafe/report.hpp"
#include "tollsafe/stats.hpp"
#include "tollsafe/synth.hpp"
#include "tollsafe/trajectory.hpp"
#include "tollsafe/zones.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename F>
int guarded(F&& body) {
  try {
    body();
    return TS_OK;
  } catch (const tollsafe::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(TS_ERROR_INTERNAL, e.what());
  }
}

tollsafe::KinematicState to_state(const ts_state& s, const std::string& id) {
  tollsafe::KinematicState k;
  k.x = s.x;
  k.y = s.y;
  k.heading_deg = s.heading_deg;
  k.speed = s.speed;
  k.length = s.length;
  k.width = s.width;
  k.vehicle_id = id;
  return k;
}

int require(const void* p, const char* what) {
  if (p) return TS_OK;
  return fail(TS_ERROR_CONFIG, std::string("null argument: ") + what);
}

}  // namespace

struct ts_observations {
  std::vector<tollsafe::InteractionObservation> rows;
};

struct ts_result {
  tollsafe::EstimationResult result;
};

extern "C" {

const char* ts_last_error(void) { return g_last_error.c_str(); }

int ts_modified_ttc(const ts_state* vehicle1, const ts_state* vehicle2, double* ttc,
                    int* contact_class, int* leader, double* alpha_deg) {
  if (int rc = require(vehicle1, "vehicle1")) return rc;
  if (int rc = require(vehicle2, "vehicle2")) return rc;
  return guarded([&] {
    tollsafe::TtcResult r =
        tollsafe::modified_ttc(to_state(*vehicle1, "1"), to_state(*vehicle2, "2"), {});
    if (ttc) *ttc = r.ttc;
    if (contact_class) *contact_class = static_cast<int>(r.contact_class);
    if (leader) *leader = r.leader_id == "1" ? 1 : (r.leader_id == "2" ? 2 : 0);
    if (alpha_deg) *alpha_deg = r.alpha_deg;
  });
}

int ts_ttc_longitudinal(const ts_state* leader, const ts_state* follower, double* ttc) {
  if (int rc = require(leader, "leader")) return rc;
  if (int rc = require(follower, "follower")) return rc;
  if (int rc = require(ttc, "ttc")) return rc;
  return guarded([&] {
    *ttc = tollsafe::ttc_longitudinal(to_state(*leader, "l"), to_state(*follower, "f"));
  });
}

void ts_detect_options_init(ts_detect_options* options) {
  if (!options) return;
  options->slight_threshold_s = 3.0;
  options->severe_threshold_s = 1.5;
  options->stride_frames = 30;
  options->fps = 30;
  options->gating_radius_m = 50.0;
  options->congestion_window_s = 10.0;
  options->congestion_speed_mps = 3.0;
}

int ts_detect(const char* trajectories_csv, const char* zones_json,
              const ts_detect_options* options, const char* observations_csv_out,
              const char* summary_txt_out) {
  if (int rc = require(trajectories_csv, "trajectories_csv")) return rc;
  if (int rc = require(zones_json, "zones_json")) return rc;
  if (int rc = require(observations_csv_out, "observations_csv_out")) return rc;
  return guarded([&] {
    ts_detect_options defaults;
    ts_detect_options_init(&defaults);
    const ts_detect_options& o = options ? *options : defaults;
    if (!(o.slight_threshold_s > o.severe_threshold_s && o.severe_threshold_s > 0.0))
      throw tollsafe::config_error("thresholds must satisfy slight > severe > 0");
    if (o.stride_frames <= 0 || o.fps <= 0)
      throw tollsafe::config_error("stride_frames and fps must be positive");

    tollsafe::BuildConfig cfg;
    cfg.thresholds.slight_s = o.slight_threshold_s;
    cfg.thresholds.severe_s = o.severe_threshold_s;
    cfg.sampling.stride_frames = o.stride_frames;
    cfg.sampling.gating_radius_m = o.gating_radius_m;
    cfg.congestion.window_seconds = o.congestion_window_s;
    cfg.congestion.speed_threshold = o.congestion_speed_mps;
    cfg.fps = o.fps;

    tollsafe::LoadConfig load_cfg;
    load_cfg.fps = o.fps;
    tollsafe::LoadResult loaded = tollsafe::load_trajectories(trajectories_csv, load_cfg);
    tollsafe::ZoneMap zones = tollsafe::load_zone_map(zones_json);
    auto observations = tollsafe::build_observations(loaded.tracks, zones, cfg);
    tollsafe::write_observations(observations, observations_csv_out);
    if (summary_txt_out) {
      std::ofstream out(summary_txt_out);
      if (!out) throw tollsafe::data_error(std::string("cannot write summary: ") +
                                           summary_txt_out);
      if (observations.empty())
        out << "No interactions detected.\n";
      else
        out << tollsafe::render_summary(tollsafe::summarize_dataset(observations));
    }
  });
}

int ts_observations_load(const char* observations_csv, ts_observations** out) {
  if (int rc = require(observations_csv, "observations_csv")) return rc;
  if (int rc = require(out, "out")) return rc;
  return guarded([&] {
    auto handle = std::make_unique<ts_observations>();
    handle->rows = tollsafe::read_observations(observations_csv);
    *out = handle.release();
  });
}

void ts_observations_free(ts_observations* observations) { delete observations; }

long ts_observations_count(const ts_observations* observations) {
  return observations ? static_cast<long>(observations->rows.size()) : 0;
}

int ts_dataset(const ts_observations* observations, const char* model_json,
               const char* dataset_csv_out) {
  if (int rc = require(observations, "observations")) return rc;
  if (int rc = require(model_json, "model_json")) return rc;
  if (int rc = require(dataset_csv_out, "dataset_csv_out")) return rc;
  return guarded([&] {
    tollsafe::ModelFile model = tollsafe::load_model_file(model_json);
    tollsafe::ConflictType family = model.family == "sideswipe"
                                        ? tollsafe::ConflictType::Sideswipe
                                        : tollsafe::ConflictType::RearEnd;
    tollsafe::ChoiceDataset data = tollsafe::dataset_from_observations(
        observations->rows, family, model.covariate_names, model.z_names);
    tollsafe::write_choice_dataset(data, dataset_csv_out);
  });
}

int ts_estimate(const char* dataset_csv, const char* model_json, long draws_override,
                const char* result_json_out, const char* report_txt_out) {
  if (int rc = require(dataset_csv, "dataset_csv")) return rc;
  if (int rc = require(model_json, "model_json")) return rc;
  if (int rc = require(result_json_out, "result_json_out")) return rc;
  return guarded([&] {
    tollsafe::ModelFile model = tollsafe::load_model_file(model_json);
    tollsafe::ChoiceDataset data = tollsafe::read_choice_dataset(dataset_csv);
    if (draws_override > 0) model.spec.draws = static_cast<std::size_t>(draws_override);
    tollsafe::EstimationResult result = tollsafe::maximize(data, model.spec);
    tollsafe::save_estimation_result(result, result_json_out);
    if (report_txt_out) {
      std::ofstream out(report_txt_out);
      if (!out) throw tollsafe::data_error(std::string("cannot write report: ") +
                                           report_txt_out);
      out << tollsafe::render_estimation_report(result);
    }
  });
}

int ts_result_load(const char* result_json, ts_result** out) {
  if (int rc = require(result_json, "result_json")) return rc;
  if (int rc = require(out, "out")) return rc;
  return guarded([&] {
    auto handle = std::make_unique<ts_result>();
    handle->result = tollsafe::load_estimation_result(result_json);
    *out = handle.release();
  });
}

void ts_result_free(ts_result* result) { delete result; }

#define TS_RESULT_GETTER(name, expr)                           \
  int name(const ts_result* result, double* value) {           \
    if (int rc = require(result, "result")) return rc;         \
    if (int rc = require(value, "value")) return rc;           \
    *value = (expr);                                           \
    return TS_OK;                                              \
  }

TS_RESULT_GETTER(ts_result_loglik, result->result.loglik)
TS_RESULT_GETTER(ts_result_loglik0, result->result.loglik0)
TS_RESULT_GETTER(ts_result_aic, result->result.aic)
TS_RESULT_GETTER(ts_result_mcfadden_r2, result->result.mcfadden_r2)

#undef TS_RESULT_GETTER

int ts_result_df(const ts_result* result, int* df) {
  if (int rc = require(result, "result")) return rc;
  if (int rc = require(df, "df")) return rc;
  *df = result->result.df;
  return TS_OK;
}

int ts_result_correlation(const ts_result* result, int row, int col, double* value) {
  if (int rc = require(result, "result")) return rc;
  if (int rc = require(value, "value")) return rc;
  const Eigen::MatrixXd& m = result->result.correlation;
  if (row < 0 || col < 0 || row >= m.rows() || col >= m.cols())
    return fail(TS_ERROR_CONFIG, "correlation index out of range");
  *value = m(row, col);
  return TS_OK;
}

int ts_compare(const char* restricted_result_json, const char* full_result_json,
               const char* comparison_json_out, const char* report_txt_out) {
  if (int rc = require(restricted_result_json, "restricted_result_json")) return rc;
  if (int rc = require(full_result_json, "full_result_json")) return rc;
  if (int rc = require(comparison_json_out, "comparison_json_out")) return rc;
  return guarded([&] {
    tollsafe::EstimationResult a =
        tollsafe::load_estimation_result(restricted_result_json);
    tollsafe::EstimationResult b = tollsafe::load_estimation_result(full_result_json);
    tollsafe::ModelComparison c = tollsafe::compare_results(a, b);
    tollsafe::save_comparison(c, comparison_json_out);
    if (report_txt_out) {
      std::ofstream out(report_txt_out);
      if (!out) throw tollsafe::data_error(std::string("cannot write report: ") +
                                           report_txt_out);
      out << tollsafe::render_comparison(c);
    }
  });
}

int ts_lr_test(double ll_restricted, double ll_full, int df_diff, double* statistic,
               double* p_value) {
  return guarded([&] {
    tollsafe::LrTestResult r = tollsafe::lr_test(ll_restricted, ll_full, df_diff);
    if (statistic) *statistic = r.statistic;
    if (p_value) *p_value = r.p_value;
  });
}

int ts_fit_metrics(double loglik, double loglik0, int df, double* mcfadden_r2,
                   double* aic) {
  return guarded([&] {
    tollsafe::FitMetrics m = tollsafe::fit_metrics(loglik, loglik0, df);
    if (mcfadden_r2) *mcfadden_r2 = m.mcfadden_r2;
    if (aic) *aic = m.aic;
  });
}

int ts_sigma_from_cholesky(const double* gamma, int k, double* sigma_out) {
  if (int rc = require(gamma, "gamma")) return rc;
  if (int rc = require(sigma_out, "sigma_out")) return rc;
  if (k <= 0) return fail(TS_ERROR_CONFIG, "k must be positive");
  return guarded([&] {
    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) g(i, j) = gamma[i * k + j];
    auto sigma = tollsafe::sigma_from_cholesky(g);
    for (int i = 0; i < k; ++i) sigma_out[i] = sigma[static_cast<std::size_t>(i)];
  });
}

int ts_correlation_from_cholesky(const double* gamma, int k, double* correlation_out) {
  if (int rc = require(gamma, "gamma")) return rc;
  if (int rc = require(correlation_out, "correlation_out")) return rc;
  if (k <= 0) return fail(TS_ERROR_CONFIG, "k must be positive");
  return guarded([&] {
    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) g(i, j) = gamma[i * k + j];
    Eigen::MatrixXd cor = tollsafe::correlation_matrix(g);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) correlation_out[i * k + j] = cor(i, j);
  });
}

int ts_plot_trajectories(const char* trajectories_csv, const char* polylines_out) {
  if (int rc = require(trajectories_csv, "trajectories_csv")) return rc;
  if (int rc = require(polylines_out, "polylines_out")) return rc;
  return guarded([&] {
    tollsafe::LoadResult loaded = tollsafe::load_trajectories(trajectories_csv);
    tollsafe::write_trajectory_polylines(loaded.tracks, polylines_out);
  });
}

int ts_plot_ttc_histogram(const ts_observations* observations,
                          const char* histogram_csv_out, double bin_width) {
  if (int rc = require(observations, "observations")) return rc;
  if (int rc = require(histogram_csv_out, "histogram_csv_out")) return rc;
  return guarded([&] {
    tollsafe::write_ttc_histogram(observations->rows, histogram_csv_out, bin_width);
  });
}

int ts_synth_scene(const char* scene_json, const char* trajectories_csv_out) {
  if (int rc = require(scene_json, "scene_json")) return rc;
  if (int rc = require(trajectories_csv_out, "trajectories_csv_out")) return rc;
  return guarded([&] {
    tollsafe::SceneSpec spec = tollsafe::load_scene_spec(scene_json);
    tollsafe::generate_scene(spec, trajectories_csv_out);
  });
}

int ts_synth_choices(const char* truth_json, long long seed_override,
                     const char* dataset_csv_out) {
  if (int rc = require(truth_json, "truth_json")) return rc;
  if (int rc = require(dataset_csv_out, "dataset_csv_out")) return rc;
  return guarded([&] {
    tollsafe::SimulationTruth truth = tollsafe::load_simulation_truth(truth_json);
    if (seed_override >= 0)
      truth.seed = static_cast<unsigned long long>(seed_override);
    tollsafe::SimulatedChoices sim = tollsafe::simulate_choices(truth);
    tollsafe::write_choice_dataset(sim.dataset, dataset_csv_out);
  });
}

}  // extern "C"
