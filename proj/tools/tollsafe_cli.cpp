// Command-line front end. Orchestrates the detection pipeline, the choice
// model estimator, and the synthetic generators through the C API only.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 convergence
// failure, 4 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tollsafe/capi.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitConfig = 1;
constexpr int kExitInternal = 4;

struct RunConfig {
  std::string trajectories;
  std::string zones;
  std::string observations;
  std::string model;
  std::string dataset;
  std::string result_restricted;
  std::string result_full;
  std::string scene;
  std::string truth;
  std::string output_dir = ".";
  long long seed = -1;
  long draws = 0;          // 0 = use the model file's value
  int stride = 0;          // 0 = default
  double slight_threshold = 3.0;
  double severe_threshold = 1.5;
  int fps = 30;
  double bin_width = 0.5;
};

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
  RunConfig c;
  c.trajectories = j.value("trajectories", "");
  c.zones = j.value("zones", "");
  c.observations = j.value("observations", "");
  c.model = j.value("model", "");
  c.dataset = j.value("dataset", "");
  c.result_restricted = j.value("result_restricted", "");
  c.result_full = j.value("result_full", "");
  c.scene = j.value("scene", "");
  c.truth = j.value("truth", "");
  c.output_dir = j.value("output_dir", ".");
  c.seed = j.value("seed", -1LL);
  c.draws = j.value("draws", 0L);
  c.stride = j.value("stride", 0);
  if (j.contains("thresholds")) {
    c.slight_threshold = j["thresholds"].value("slight", 3.0);
    c.severe_threshold = j["thresholds"].value("severe", 1.5);
  }
  c.fps = j.value("fps", 30);
  c.bin_width = j.value("bin_width", 0.5);
  return c;
}

int config_fail(const std::string& message) {
  std::cerr << "config error: " << message << "\n";
  return kExitConfig;
}

int api_fail(int rc, const std::string& what) {
  std::cerr << what << " failed: " << ts_last_error() << "\n";
  return rc;
}

std::string out_path(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  return (fs::path(c.output_dir) / name).string();
}

int require_file(const std::string& path, const std::string& what) {
  if (path.empty()) return config_fail(what + " path missing from config");
  if (!fs::exists(path)) return config_fail(what + " file not found: " + path);
  return 0;
}

int cmd_detect(const RunConfig& c) {
  if (int rc = require_file(c.trajectories, "trajectories")) return rc;
  if (int rc = require_file(c.zones, "zone map")) return rc;
  if (!(c.slight_threshold > c.severe_threshold && c.severe_threshold > 0.0))
    return config_fail("thresholds must satisfy slight > severe > 0");

  ts_detect_options options;
  ts_detect_options_init(&options);
  options.slight_threshold_s = c.slight_threshold;
  options.severe_threshold_s = c.severe_threshold;
  if (c.stride > 0) options.stride_frames = c.stride;
  options.fps = c.fps;

  std::string obs = out_path(c, "observations.csv");
  std::string summary = out_path(c, "summary.txt");
  if (int rc = ts_detect(c.trajectories.c_str(), c.zones.c_str(), &options,
                         obs.c_str(), summary.c_str()))
    return api_fail(rc, "detect");
  std::cout << "wrote " << obs << " and " << summary << "\n";
  return 0;
}

int cmd_dataset(const RunConfig& c) {
  if (int rc = require_file(c.observations, "observations")) return rc;
  if (int rc = require_file(c.model, "model spec")) return rc;
  ts_observations* obs = nullptr;
  if (int rc = ts_observations_load(c.observations.c_str(), &obs))
    return api_fail(rc, "observation load");
  std::string dataset = out_path(c, "dataset.csv");
  int rc = ts_dataset(obs, c.model.c_str(), dataset.c_str());
  ts_observations_free(obs);
  if (rc) return api_fail(rc, "dataset");
  std::cout << "wrote " << dataset << "\n";
  return 0;
}

int cmd_estimate(const RunConfig& c) {
  if (int rc = require_file(c.dataset, "dataset")) return rc;
  if (int rc = require_file(c.model, "model spec")) return rc;
  std::string result = out_path(c, "result.json");
  std::string report = out_path(c, "report.txt");
  if (int rc = ts_estimate(c.dataset.c_str(), c.model.c_str(), c.draws,
                           result.c_str(), report.c_str()))
    return api_fail(rc, "estimate");
  std::cout << "wrote " << result << " and " << report << "\n";
  return 0;
}

int cmd_compare(const RunConfig& c) {
  if (int rc = require_file(c.result_restricted, "restricted result")) return rc;
  if (int rc = require_file(c.result_full, "full result")) return rc;
  std::string comparison = out_path(c, "comparison.json");
  std::string report = out_path(c, "comparison.txt");
  if (int rc = ts_compare(c.result_restricted.c_str(), c.result_full.c_str(),
                          comparison.c_str(), report.c_str()))
    return api_fail(rc, "compare");
  std::ifstream in(report);
  std::cout << in.rdbuf();
  return 0;
}

int cmd_plot(const RunConfig& c) {
  bool did_any = false;
  if (!c.trajectories.empty()) {
    if (int rc = require_file(c.trajectories, "trajectories")) return rc;
    std::string polylines = out_path(c, "trajectories_plot.csv");
    if (int rc = ts_plot_trajectories(c.trajectories.c_str(), polylines.c_str()))
      return api_fail(rc, "trajectory plot");
    std::cout << "wrote " << polylines << "\n";
    did_any = true;
  }
  if (!c.observations.empty()) {
    if (int rc = require_file(c.observations, "observations")) return rc;
    ts_observations* obs = nullptr;
    if (int rc = ts_observations_load(c.observations.c_str(), &obs))
      return api_fail(rc, "observation load");
    std::string histogram = out_path(c, "ttc_histogram.csv");
    int rc = ts_plot_ttc_histogram(obs, histogram.c_str(), c.bin_width);
    ts_observations_free(obs);
    if (rc) return api_fail(rc, "TTC histogram");
    std::cout << "wrote " << histogram << "\n";
    did_any = true;
  }
  if (!did_any)
    return config_fail("plot needs a trajectories and/or observations path");
  return 0;
}

int cmd_synth(const RunConfig& c) {
  bool did_any = false;
  if (!c.scene.empty()) {
    if (int rc = require_file(c.scene, "scene spec")) return rc;
    std::string scene_csv = out_path(c, "scene.csv");
    if (int rc = ts_synth_scene(c.scene.c_str(), scene_csv.c_str()))
      return api_fail(rc, "scene generation");
    std::cout << "wrote " << scene_csv << "\n";
    did_any = true;
  }
  if (!c.truth.empty()) {
    if (int rc = require_file(c.truth, "simulation truth")) return rc;
    std::string dataset_csv = out_path(c, "synthetic_dataset.csv");
    if (int rc = ts_synth_choices(c.truth.c_str(), c.seed, dataset_csv.c_str()))
      return api_fail(rc, "choice simulation");
    std::cout << "wrote " << dataset_csv << "\n";
    did_any = true;
  }
  if (!did_any) return config_fail("synth needs a scene and/or truth path");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory conflict detection and choice-model estimation"};
  app.require_subcommand(1);

  std::string config_path;
  long long seed_override = -2;
  long draws_override = 0;
  int stride_override = 0;
  std::string thresholds_override;

  app.add_option("-c,--config", config_path, "run configuration (JSON)")->required();
  app.add_option("--seed", seed_override, "override the configured seed");
  app.add_option("--draws", draws_override, "override the simulation draw count");
  app.add_option("--stride", stride_override, "override the sampling stride (frames)");
  app.add_option("--thresholds", thresholds_override,
                 "override severity thresholds as slight,severe");

  auto* detect = app.add_subcommand("detect", "detect conflicts in trajectories");
  auto* dataset = app.add_subcommand("dataset", "build a choice dataset");
  auto* estimate = app.add_subcommand("estimate", "fit the configured model");
  auto* compare = app.add_subcommand("compare", "compare two stored fits");
  auto* plot = app.add_subcommand("plot", "emit figure data files");
  auto* synth = app.add_subcommand("synth", "generate synthetic inputs");

  CLI11_PARSE(app, argc, argv);

  RunConfig config;
  try {
    config = load_run_config(config_path);
  } catch (const std::exception& e) {
    return config_fail(e.what());
  }
  if (seed_override != -2) config.seed = seed_override;
  if (draws_override > 0) config.draws = draws_override;
  if (stride_override > 0) config.stride = stride_override;
  if (!thresholds_override.empty()) {
    double slight = 0.0, severe = 0.0;
    if (std::sscanf(thresholds_override.c_str(), "%lf,%lf", &slight, &severe) != 2)
      return config_fail("--thresholds expects slight,severe");
    config.slight_threshold = slight;
    config.severe_threshold = severe;
  }

  try {
    if (detect->parsed()) return cmd_detect(config);
    if (dataset->parsed()) return cmd_dataset(config);
    if (estimate->parsed()) return cmd_estimate(config);
    if (compare->parsed()) return cmd_compare(config);
    if (plot->parsed()) return cmd_plot(config);
    if (synth->parsed()) return cmd_synth(config);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitConfig;
}
