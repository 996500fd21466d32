#include "tollsafe/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "tollsafe/error.hpp"

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

int name_index(const std::vector<std::string>& names, const std::string& name,
               const std::string& what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw config_error("unknown " + what + " name: " + name);
  return static_cast<int>(it - names.begin());
}

// non-finite entries round-trip as JSON null
Eigen::VectorXd vector_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    v[static_cast<Eigen::Index>(i)] =
        a[i].is_null() ? std::numeric_limits<double>::quiet_NaN() : a[i].get<double>();
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i]))
      a.push_back(v[i]);
    else
      a.push_back(nullptr);
  }
  return a;
}

Eigen::MatrixXd matrix_from_json(const json& a) {
  if (a.empty()) return {};
  Eigen::MatrixXd m(a.size(), a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j];
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

}  // namespace

ModelFile load_model_file(const std::string& path) {
  json j = load_json(path);
  ModelFile model;
  try {
    model.family = j.value("family", "rear_end");
    model.covariate_names = j.value("covariates", std::vector<std::string>{});
    model.z_names = j.value("hetero_covariates", std::vector<std::string>{});
    model.spec.correlated = j.value("correlated", false);
    model.spec.draws = j.value("draws", std::size_t{1000});
    model.spec.halton_skip = j.value("skip", std::size_t{100});
    for (const json& c : j.at("coefficients")) {
      CoefficientSpec coef;
      coef.name = c.at("name");
      std::string alt = c.at("alternative");
      if (alt == "slight")
        coef.alternative = 1;
      else if (alt == "severe")
        coef.alternative = 2;
      else
        throw config_error("coefficient '" + coef.name +
                           "': alternative must be 'slight' or 'severe'");
      if (c.contains("covariate") && !c["covariate"].is_null())
        coef.covariate = name_index(model.covariate_names, c["covariate"], "covariate");
      coef.random = c.value("random", false);
      coef.mean_fixed_zero = c.value("mean_fixed_zero", false);
      for (const std::string& z : c.value("hetero", std::vector<std::string>{}))
        coef.hetero_z.push_back(name_index(model.z_names, z, "hetero covariate"));
      model.spec.coefficients.push_back(std::move(coef));
    }
  } catch (const json::exception& e) {
    throw config_error("model spec " + path + ": " + e.what());
  }
  return model;
}

void save_model_file(const ModelFile& model, const std::string& path) {
  json j;
  j["family"] = model.family;
  j["covariates"] = model.covariate_names;
  j["hetero_covariates"] = model.z_names;
  j["correlated"] = model.spec.correlated;
  j["draws"] = model.spec.draws;
  j["skip"] = model.spec.halton_skip;
  json coeffs = json::array();
  for (const auto& c : model.spec.coefficients) {
    json jc;
    jc["name"] = c.name;
    jc["alternative"] = c.alternative == 1 ? "slight" : "severe";
    if (c.covariate >= 0)
      jc["covariate"] = model.covariate_names[static_cast<std::size_t>(c.covariate)];
    else
      jc["covariate"] = nullptr;
    jc["random"] = c.random;
    jc["mean_fixed_zero"] = c.mean_fixed_zero;
    std::vector<std::string> hetero;
    for (int z : c.hetero_z) hetero.push_back(model.z_names[static_cast<std::size_t>(z)]);
    jc["hetero"] = hetero;
    coeffs.push_back(jc);
  }
  j["coefficients"] = coeffs;
  std::ofstream out(path);
  if (!out) throw config_error("cannot write model spec: " + path);
  out << j.dump(2) << "\n";
}

ChoiceDataset dataset_from_observations(
    const std::vector<InteractionObservation>& observations, ConflictType family,
    const std::vector<std::string>& covariate_names,
    const std::vector<std::string>& z_names) {
  ChoiceDataset data;
  data.covariate_names = covariate_names;
  data.z_names = z_names;
  for (const auto& o : observations) {
    if (o.family != family) continue;
    ChoiceObservation c;
    c.group_id = o.group_id;
    c.outcome = static_cast<int>(o.outcome);
    for (const auto& name : covariate_names) c.x.push_back(observation_field(o, name));
    for (const auto& name : z_names) c.z.push_back(observation_field(o, name));
    data.observations.push_back(std::move(c));
  }
  if (data.observations.empty())
    throw data_error("Empty: no observations of the requested family");
  return data;
}

void write_choice_dataset(const ChoiceDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write dataset: " + path);
  out << std::setprecision(17);
  out << "group_id,outcome";
  for (const auto& n : data.covariate_names) out << ',' << n;
  for (const auto& n : data.z_names) out << ",z:" << n;
  out << "\n";
  for (const auto& o : data.observations) {
    out << o.group_id << ',' << o.outcome;
    for (double v : o.x) out << ',' << v;
    for (double v : o.z) out << ',' << v;
    out << "\n";
  }
}

ChoiceDataset read_choice_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty dataset file: " + path);

  ChoiceDataset data;
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) header.push_back(field);
  }
  if (header.size() < 2 || header[0] != "group_id" || header[1] != "outcome")
    throw data_error("dataset " + path + ": unexpected header");
  for (std::size_t i = 2; i < header.size(); ++i) {
    if (header[i].rfind("z:", 0) == 0)
      data.z_names.push_back(header[i].substr(2));
    else
      data.covariate_names.push_back(header[i]);
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != header.size())
      throw data_error("dataset " + path + " line " + std::to_string(line_no) +
                       ": wrong field count");
    ChoiceObservation o;
    o.group_id = f[0];
    o.outcome = std::stoi(f[1]);
    std::size_t idx = 2;
    for (std::size_t k = 0; k < data.covariate_names.size(); ++k)
      o.x.push_back(std::stod(f[idx++]));
    for (std::size_t k = 0; k < data.z_names.size(); ++k)
      o.z.push_back(std::stod(f[idx++]));
    data.observations.push_back(std::move(o));
  }
  return data;
}

void save_estimation_result(const EstimationResult& result, const std::string& path) {
  json j;
  j["parameter_names"] = result.parameter_names;
  j["estimates"] = vector_to_json(result.estimates);
  j["std_errors"] = vector_to_json(result.std_errors);
  j["t_stats"] = vector_to_json(result.t_stats);
  j["loglik"] = result.loglik;
  j["loglik0"] = result.loglik0;
  j["mcfadden_r2"] = result.mcfadden_r2;
  j["aic"] = result.aic;
  j["df"] = result.df;
  j["n_observations"] = result.n_observations;
  j["n_groups"] = result.n_groups;
  j["cholesky"] = matrix_to_json(result.cholesky);
  j["covariance"] = matrix_to_json(result.covariance);
  j["correlation"] = matrix_to_json(result.correlation);
  j["sigma"] = result.sigma;
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  j["se_available"] = result.se_available;
  j["message"] = result.message;
  std::ofstream out(path);
  if (!out) throw data_error("cannot write result: " + path);
  out << j.dump(2) << "\n";
}

EstimationResult load_estimation_result(const std::string& path) {
  json j = load_json(path);
  EstimationResult r;
  try {
    r.parameter_names = j.at("parameter_names").get<std::vector<std::string>>();
    r.estimates = vector_from_json(j.at("estimates"));
    r.std_errors = vector_from_json(j.at("std_errors"));
    r.t_stats = vector_from_json(j.at("t_stats"));
    r.loglik = j.at("loglik");
    r.loglik0 = j.at("loglik0");
    r.mcfadden_r2 = j.at("mcfadden_r2");
    r.aic = j.at("aic");
    r.df = j.at("df");
    r.n_observations = j.at("n_observations");
    r.n_groups = j.at("n_groups");
    r.cholesky = matrix_from_json(j.at("cholesky"));
    r.covariance = matrix_from_json(j.at("covariance"));
    r.correlation = matrix_from_json(j.at("correlation"));
    r.sigma = j.at("sigma").get<std::vector<double>>();
    r.converged = j.at("converged");
    r.iterations = j.at("iterations");
    r.se_available = j.at("se_available");
    r.message = j.value("message", "");
  } catch (const json::exception& e) {
    throw data_error("result file " + path + ": " + e.what());
  }
  return r;
}

}  // namespace tollsafe
