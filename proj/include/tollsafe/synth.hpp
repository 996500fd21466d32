#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tollsafe/mixed_logit.hpp"
#include "tollsafe/trajectory.hpp"

namespace tollsafe {

/// One vehicle of a synthetic scene: a straight constant-speed track with an
/// optional constant heading rate.
struct SceneVehicle {
  std::string id;
  VehicleClass vclass = VehicleClass::PrivateCar;
  Payment payment = Payment::Manual;
  double x = 0.0, y = 0.0;
  double heading_deg = 0.0;
  double speed = 0.0;           // m/s
  double heading_rate = 0.0;    // deg/s, clockwise negative of signed rate
  double length = 4.0, width = 2.0;
};

struct SceneSpec {
  int fps = 30;
  long frames = 0;
  std::vector<SceneVehicle> vehicles;
};

SceneSpec load_scene_spec(const std::string& path);

/// Write the scene as a trajectory table in the pipeline input format.
void generate_scene(const SceneSpec& spec, const std::string& output_path);

/// Ground truth for choice-data simulation: a model spec with its true
/// packed parameter values. Covariates are standard normal unless an entry
/// of binary_x / binary_z marks them Bernoulli(1/2).
struct SimulationTruth {
  ModelSpec spec;
  Eigen::VectorXd params;
  std::size_t n_covariates = 0;
  std::size_t n_z = 0;
  std::vector<bool> binary_x;  // optional, size n_covariates
  std::vector<bool> binary_z;  // optional, size n_z
  std::size_t groups = 100;
  std::size_t observations_per_group = 10;
  unsigned long long seed = 1;
};

SimulationTruth load_simulation_truth(const std::string& path);

struct SimulatedChoices {
  ChoiceDataset dataset;
  /// Per group: the random part of each correlated coefficient (mean + Γω,
  /// without the Θ·z shift), for white-box recovery checks.
  Eigen::MatrixXd group_coefficients;  // groups x n_random
};

/// Draw one omega per group, realize coefficients per observation, and
/// sample outcomes from the logit probabilities. Bit-reproducible for a
/// fixed seed.
SimulatedChoices simulate_choices(const SimulationTruth& truth);

}  // namespace tollsafe
