#include "tollsafe/synth.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

#include <json.hpp>

#include "tollsafe/error.hpp"
#include "tollsafe/model_io.hpp"

namespace tollsafe {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw config_error("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace

SceneSpec load_scene_spec(const std::string& path) {
  json j = load_json(path);
  SceneSpec spec;
  try {
    spec.fps = j.value("fps", 30);
    spec.frames = j.at("frames");
    for (const json& v : j.value("vehicles", json::array())) {
      SceneVehicle sv;
      sv.id = v.at("id");
      sv.vclass = vehicle_class_from_string(v.value("class", "private_car"));
      sv.payment = payment_from_string(v.value("payment", "manual"));
      sv.x = v.at("x");
      sv.y = v.at("y");
      sv.heading_deg = v.value("heading", 0.0);
      sv.speed = v.at("speed");
      sv.heading_rate = v.value("heading_rate", 0.0);
      sv.length = v.value("length", 4.0);
      sv.width = v.value("width", 2.0);
      spec.vehicles.push_back(std::move(sv));
    }
  } catch (const json::exception& e) {
    throw config_error("scene spec " + path + ": " + e.what());
  }
  if (spec.fps <= 0 || spec.frames < 0)
    throw config_error("scene spec: fps must be positive, frames non-negative");
  return spec;
}

void generate_scene(const SceneSpec& spec, const std::string& output_path) {
  std::ofstream out(output_path);
  if (!out) throw data_error("cannot write scene: " + output_path);
  out << std::setprecision(17);
  out << "frame,vehicle_id,x,y,length,width,heading,class,payment\n";
  const double dt = 1.0 / spec.fps;
  for (long f = 0; f < spec.frames; ++f) {
    double t = f * dt;
    for (const SceneVehicle& v : spec.vehicles) {
      double x = v.x, y = v.y, heading = v.heading_deg;
      if (std::fabs(v.heading_rate) < 1e-12) {
        Vec2 u = heading_unit(v.heading_deg);
        x += u.x * v.speed * t;
        y += u.y * v.speed * t;
      } else {
        // constant-rate turn: integrate the unit heading analytically
        double w = deg2rad(v.heading_rate);  // rad/s
        double h0 = deg2rad(v.heading_deg);
        double h = h0 + w * t;
        x += v.speed / w * (std::sin(h) - std::sin(h0));
        y += -v.speed / w * (std::cos(h) - std::cos(h0));
        heading = v.heading_deg + v.heading_rate * t;
      }
      out << f << ',' << v.id << ',' << x << ',' << y << ',' << v.length << ','
          << v.width << ',' << normalize_heading(heading) << ','
          << to_string(v.vclass) << ',' << to_string(v.payment) << "\n";
    }
  }
}

SimulationTruth load_simulation_truth(const std::string& path) {
  json j = load_json(path);
  SimulationTruth truth;
  try {
    truth.n_covariates = j.at("n_covariates");
    truth.n_z = j.value("n_z", std::size_t{0});
    truth.binary_x = j.value("binary_x", std::vector<bool>{});
    truth.binary_z = j.value("binary_z", std::vector<bool>{});
    truth.groups = j.at("groups");
    truth.observations_per_group = j.at("observations_per_group");
    truth.seed = j.value("seed", 1ULL);
    truth.spec.correlated = j.value("correlated", false);
    truth.spec.draws = j.value("draws", std::size_t{1000});
    for (const json& c : j.at("coefficients")) {
      CoefficientSpec coef;
      coef.name = c.at("name");
      std::string alt = c.at("alternative");
      coef.alternative = alt == "slight" ? 1 : 2;
      coef.covariate = c.contains("covariate") && !c["covariate"].is_null()
                           ? c["covariate"].get<int>()
                           : -1;
      coef.random = c.value("random", false);
      coef.mean_fixed_zero = c.value("mean_fixed_zero", false);
      coef.hetero_z = c.value("hetero", std::vector<int>{});
      truth.spec.coefficients.push_back(std::move(coef));
    }
    std::vector<double> p = j.at("params").get<std::vector<double>>();
    truth.params = Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  } catch (const json::exception& e) {
    throw config_error("simulation truth " + path + ": " + e.what());
  }
  return truth;
}

SimulatedChoices simulate_choices(const SimulationTruth& truth) {
  const ModelSpec& spec = truth.spec;
  if (static_cast<std::size_t>(truth.params.size()) != spec.parameter_count())
    throw config_error("DimensionMismatch: truth parameter vector length");
  const std::size_t k_rand = spec.n_random();

  std::mt19937_64 rng(truth.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SimulatedChoices out;
  out.dataset.covariate_names.resize(truth.n_covariates);
  for (std::size_t k = 0; k < truth.n_covariates; ++k)
    out.dataset.covariate_names[k] = "x" + std::to_string(k);
  out.dataset.z_names.resize(truth.n_z);
  for (std::size_t k = 0; k < truth.n_z; ++k)
    out.dataset.z_names[k] = "z" + std::to_string(k);
  out.group_coefficients.resize(static_cast<Eigen::Index>(truth.groups),
                                static_cast<Eigen::Index>(k_rand));

  const std::vector<double> zeros(truth.n_z, 0.0);
  const int n_alt = static_cast<int>(out.dataset.n_alternatives());

  for (std::size_t g = 0; g < truth.groups; ++g) {
    Eigen::VectorXd omega(k_rand);
    for (std::size_t d = 0; d < k_rand; ++d) omega[static_cast<Eigen::Index>(d)] = normal(rng);

    // random part per coefficient at z = 0: mean + Γω, recorded per group
    Eigen::VectorXd at_zero = realize_coefficients(spec, truth.params, zeros, omega);
    {
      Eigen::Index k = 0;
      for (std::size_t m = 0; m < spec.coefficients.size(); ++m)
        if (spec.coefficients[m].random)
          out.group_coefficients(static_cast<Eigen::Index>(g), k++) =
              at_zero[static_cast<Eigen::Index>(m)];
    }

    for (std::size_t i = 0; i < truth.observations_per_group; ++i) {
      ChoiceObservation obs;
      obs.group_id = "g" + std::to_string(g);
      obs.x.resize(truth.n_covariates);
      for (std::size_t k = 0; k < truth.n_covariates; ++k)
        obs.x[k] = (k < truth.binary_x.size() && truth.binary_x[k])
                       ? (coin(rng) ? 1.0 : 0.0)
                       : normal(rng);
      obs.z.resize(truth.n_z);
      for (std::size_t k = 0; k < truth.n_z; ++k)
        obs.z[k] = (k < truth.binary_z.size() && truth.binary_z[k])
                       ? (coin(rng) ? 1.0 : 0.0)
                       : normal(rng);

      Eigen::VectorXd coeffs = realize_coefficients(spec, truth.params, obs.z, omega);
      Eigen::VectorXd utilities = Eigen::VectorXd::Zero(n_alt);
      for (std::size_t m = 0; m < spec.coefficients.size(); ++m) {
        const auto& c = spec.coefficients[m];
        double x = c.covariate < 0 ? 1.0 : obs.x[static_cast<std::size_t>(c.covariate)];
        utilities[c.alternative] += coeffs[static_cast<Eigen::Index>(m)] * x;
      }
      Eigen::VectorXd probs = mnl_probabilities(utilities);
      double u = unif(rng);
      double acc = 0.0;
      obs.outcome = n_alt - 1;
      for (int j = 0; j < n_alt; ++j) {
        acc += probs[j];
        if (u <= acc) {
          obs.outcome = j;
          break;
        }
      }
      out.dataset.observations.push_back(std::move(obs));
    }
  }
  return out;
}

}  // namespace tollsafe
