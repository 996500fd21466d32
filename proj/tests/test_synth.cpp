#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tollsafe/error.hpp"
#include "tollsafe/kernel.hpp"
#include "tollsafe/model_io.hpp"
#include "tollsafe/observations.hpp"
#include "tollsafe/oracle.hpp"
#include "tollsafe/synth.hpp"
#include "tollsafe/trajectory.hpp"

using namespace tollsafe;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = std::string("/tmp/tollsafe_synth_") + name;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generate_scene: constant-speed track round-trips through the pipeline") {
  SceneSpec spec;
  spec.fps = 30;
  spec.frames = 60;
  SceneVehicle v;
  v.id = "a";
  v.x = 0.0;
  v.y = 5.0;
  v.heading_deg = 35.0;
  v.speed = 15.0;
  spec.vehicles.push_back(v);

  TempFile f("scene1.csv");
  generate_scene(spec, f.path);
  LoadResult r = load_trajectories(f.path);
  REQUIRE(r.tracks.size() == 1);
  derive_kinematics(r.tracks[0], 30);
  for (double s : r.tracks[0].speed) CHECK(s == doctest::Approx(15.0).epsilon(1e-9));
  for (double w : r.tracks[0].angular_speed) CHECK(w == doctest::Approx(0.0));
}

TEST_CASE("generate_scene: turning track recovers its heading rate") {
  SceneSpec spec;
  spec.fps = 30;
  spec.frames = 45;
  SceneVehicle v;
  v.id = "t";
  v.speed = 10.0;
  v.heading_rate = 6.0;  // deg/s
  spec.vehicles.push_back(v);

  TempFile f("scene_turn.csv");
  generate_scene(spec, f.path);
  LoadResult r = load_trajectories(f.path);
  REQUIRE(r.tracks.size() == 1);
  derive_kinematics(r.tracks[0], 30);
  for (double w : r.tracks[0].angular_speed)
    CHECK(w == doctest::Approx(6.0).epsilon(1e-6));
  // speed is preserved along the arc up to chord discretization
  for (double s : r.tracks[0].speed) CHECK(s == doctest::Approx(10.0).epsilon(1e-4));
}

TEST_CASE("generate_scene: empty spec emits only the header") {
  SceneSpec spec;
  spec.frames = 0;
  TempFile f("scene_empty.csv");
  generate_scene(spec, f.path);
  LoadResult r = load_trajectories(f.path);
  CHECK(r.tracks.empty());
}

TEST_CASE("generate_scene: 8-degree crossing pair yields severe rows at the "
          "oracle-predicted frames") {
  // both vehicles aimed at a common point ~36 m ahead, closing to contact
  SceneSpec spec;
  spec.fps = 30;
  spec.frames = 150;
  SceneVehicle a, b;
  a.id = "a";
  a.x = 0.0;
  a.y = 0.0;
  a.speed = 12.0;
  b.id = "b";
  b.heading_deg = 8.0;
  b.speed = 12.0;
  Vec2 u = heading_unit(8.0);
  b.x = 36.0 - u.x * 36.0;
  b.y = -u.y * 36.0;
  spec.vehicles.push_back(a);
  spec.vehicles.push_back(b);

  TempFile f("scene_cross.csv");
  generate_scene(spec, f.path);
  LoadResult r = load_trajectories(f.path);
  REQUIRE(r.tracks.size() == 2);
  for (auto& t : r.tracks) derive_kinematics(t, 30);

  // oracle TTC series: find the first frame where TTC drops below 1.5 s
  OracleConfig oc;
  long first_severe = -1;
  for (long frame = 30; frame < 150; ++frame) {
    auto s1 = state_at(r.tracks[0], frame);
    auto s2 = state_at(r.tracks[1], frame);
    double ttc = oracle_ttc(*s1, *s2, oc);
    if (ttc < 1.5) {
      first_severe = frame;
      break;
    }
  }
  REQUIRE(first_severe > 0);

  ZoneMap zones;
  zones.study_area = {{-50, -50}, {100, -50}, {100, 50}, {-50, 50}};
  BuildConfig cfg;
  auto obs = build_observations(r.tracks, zones, cfg);
  REQUIRE(!obs.empty());

  // severe rows begin when the oracle TTC first drops below the threshold:
  // no severe row before that frame (minus one frame of discretization), and
  // the first severe row lands within the stride containing the crossing
  long first_severe_obs = -1;
  for (const auto& o : obs)
    if (o.outcome == ConflictSeverity::Severe) {
      first_severe_obs = first_severe_obs < 0 ? o.frame : std::min(first_severe_obs, o.frame);
    }
  REQUIRE(first_severe_obs >= 0);
  CHECK(first_severe_obs >= first_severe - 1);
  CHECK(first_severe_obs < first_severe + cfg.sampling.stride_frames);
}

TEST_CASE("scene spec JSON loader") {
  TempFile f("scene_spec.json");
  {
    std::ofstream out(f.path);
    out << R"({"fps": 30, "frames": 10, "vehicles": [
      {"id": "a", "x": 1, "y": 2, "speed": 5, "class": "bus", "payment": "electronic"}
    ]})";
  }
  SceneSpec spec = load_scene_spec(f.path);
  CHECK(spec.frames == 10);
  REQUIRE(spec.vehicles.size() == 1);
  CHECK(spec.vehicles[0].vclass == VehicleClass::Bus);
  CHECK(spec.vehicles[0].payment == Payment::Electronic);

  TempFile bad("scene_bad.json");
  {
    std::ofstream out(bad.path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_scene_spec(bad.path), Error);
}

TEST_CASE("simulate_choices: zero parameters give near-uniform shares") {
  SimulationTruth truth;
  truth.spec.coefficients = {{"c1", 1, -1, false, false, {}},
                             {"c2", 2, -1, false, false, {}}};
  truth.params = Eigen::VectorXd::Zero(2);
  truth.groups = 3000;
  truth.observations_per_group = 1;
  truth.seed = 5;
  SimulatedChoices sim = simulate_choices(truth);
  int counts[3] = {0, 0, 0};
  for (const auto& o : sim.dataset.observations) counts[o.outcome]++;
  for (int j = 0; j < 3; ++j)
    CHECK(std::fabs(counts[j] / 3000.0 - 1.0 / 3.0) < 0.03);
}

TEST_CASE("simulate_choices: dominant severe constant wins almost always") {
  SimulationTruth truth;
  truth.spec.coefficients = {{"c2", 2, -1, false, false, {}}};
  truth.params = Eigen::VectorXd(1);
  truth.params << 10.0;
  truth.groups = 1000;
  truth.observations_per_group = 1;
  truth.seed = 6;
  SimulatedChoices sim = simulate_choices(truth);
  int severe = 0;
  for (const auto& o : sim.dataset.observations) severe += o.outcome == 2;
  CHECK(severe >= 990);
}

TEST_CASE("simulate_choices: realized group coefficients carry the truth correlation") {
  SimulationTruth truth;
  truth.spec.coefficients = {{"a", 1, -1, true, false, {}},
                             {"b", 2, -1, true, false, {}}};
  truth.spec.correlated = true;
  // gamma rows (1, 0) and (-0.9, 0.4359): correlation -0.9, unit variances
  truth.params = Eigen::VectorXd(5);
  truth.params << 0.0, 0.0, 1.0, std::sqrt(1.0 - 0.81), -0.9;
  truth.groups = 10000;
  truth.observations_per_group = 1;
  truth.seed = 12;
  SimulatedChoices sim = simulate_choices(truth);
  REQUIRE(sim.group_coefficients.rows() == 10000);

  Eigen::VectorXd a = sim.group_coefficients.col(0);
  Eigen::VectorXd b = sim.group_coefficients.col(1);
  double ma = a.mean(), mb = b.mean();
  double cov = ((a.array() - ma) * (b.array() - mb)).mean();
  double cor = cov / std::sqrt((a.array() - ma).square().mean() *
                               (b.array() - mb).square().mean());
  CHECK(std::fabs(cor - (-0.9)) < 0.05);
}

TEST_CASE("simulate_choices: fixed seed reproduces bit-for-bit") {
  SimulationTruth truth;
  truth.spec.coefficients = {{"a", 1, 0, true, false, {}},
                             {"c2", 2, -1, false, false, {}}};
  truth.params = Eigen::VectorXd(3);
  truth.params << 0.5, -0.2, 0.4;
  truth.n_covariates = 1;
  truth.groups = 50;
  truth.observations_per_group = 4;
  truth.seed = 99;

  SimulatedChoices s1 = simulate_choices(truth);
  SimulatedChoices s2 = simulate_choices(truth);
  REQUIRE(s1.dataset.observations.size() == s2.dataset.observations.size());
  for (std::size_t i = 0; i < s1.dataset.observations.size(); ++i) {
    CHECK(s1.dataset.observations[i].outcome == s2.dataset.observations[i].outcome);
    CHECK(s1.dataset.observations[i].x[0] == s2.dataset.observations[i].x[0]);
  }
  CHECK((s1.group_coefficients - s2.group_coefficients).norm() == 0.0);

  TempFile f1("ds1.csv"), f2("ds2.csv");
  write_choice_dataset(s1.dataset, f1.path);
  write_choice_dataset(s2.dataset, f2.path);
  CHECK(slurp(f1.path) == slurp(f2.path));
}

TEST_CASE("choice dataset round trip") {
  SimulationTruth truth;
  truth.spec.coefficients = {{"a", 1, 0, false, false, {}}};
  truth.params = Eigen::VectorXd(1);
  truth.params << 0.7;
  truth.n_covariates = 1;
  truth.n_z = 1;
  truth.groups = 10;
  truth.observations_per_group = 2;
  truth.seed = 3;
  SimulatedChoices sim = simulate_choices(truth);

  TempFile f("roundtrip.csv");
  write_choice_dataset(sim.dataset, f.path);
  ChoiceDataset back = read_choice_dataset(f.path);
  REQUIRE(back.observations.size() == sim.dataset.observations.size());
  CHECK(back.covariate_names == sim.dataset.covariate_names);
  CHECK(back.z_names == sim.dataset.z_names);
  for (std::size_t i = 0; i < back.observations.size(); ++i) {
    CHECK(back.observations[i].group_id == sim.dataset.observations[i].group_id);
    CHECK(back.observations[i].outcome == sim.dataset.observations[i].outcome);
    CHECK(back.observations[i].x[0] ==
          doctest::Approx(sim.dataset.observations[i].x[0]).epsilon(1e-15));
    CHECK(back.observations[i].z[0] ==
          doctest::Approx(sim.dataset.observations[i].z[0]).epsilon(1e-15));
  }
}

TEST_CASE("simulation truth JSON loader") {
  TempFile f("truth.json");
  {
    std::ofstream out(f.path);
    out << R"({
      "n_covariates": 1, "n_z": 1, "binary_z": [true],
      "groups": 20, "observations_per_group": 5, "seed": 42,
      "correlated": true, "draws": 100,
      "coefficients": [
        {"name": "slight_const", "alternative": "slight"},
        {"name": "severe_x0", "alternative": "severe", "covariate": 0,
         "random": true, "hetero": [0]}
      ],
      "params": [0.5, -0.3, 0.4, 0.2]
    })";
  }
  SimulationTruth truth = load_simulation_truth(f.path);
  CHECK(truth.groups == 20);
  CHECK(truth.spec.correlated);
  CHECK(truth.spec.coefficients[1].random);
  CHECK(truth.spec.coefficients[1].hetero_z == std::vector<int>{0});
  CHECK(truth.params.size() == 4);
  SimulatedChoices sim = simulate_choices(truth);  // params length must match
  CHECK(sim.dataset.observations.size() == 100);
}
