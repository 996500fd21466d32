#pragma once

#include <string>
#include <vector>

#include "tollsafe/kernel.hpp"
#include "tollsafe/mixed_logit.hpp"
#include "tollsafe/observations.hpp"

namespace tollsafe {

/// A model specification file: covariate/z name lists plus the coefficient
/// layout, resolved against those lists.
struct ModelFile {
  std::string family = "rear_end";  // observation family the model applies to
  std::vector<std::string> covariate_names;
  std::vector<std::string> z_names;
  ModelSpec spec;
};

ModelFile load_model_file(const std::string& path);
void save_model_file(const ModelFile& model, const std::string& path);

/// Choice dataset from pipeline observations: keep the given family, pull x
/// and z by field name. Throws (Data) when no observation matches.
ChoiceDataset dataset_from_observations(
    const std::vector<InteractionObservation>& observations, ConflictType family,
    const std::vector<std::string>& covariate_names,
    const std::vector<std::string>& z_names);

/// Generic delimited round trip for a standalone choice dataset:
/// group_id,outcome,<x names...>,<z names prefixed "z:">.
void write_choice_dataset(const ChoiceDataset& data, const std::string& path);
ChoiceDataset read_choice_dataset(const std::string& path);

/// Machine-readable estimation result (JSON).
void save_estimation_result(const EstimationResult& result, const std::string& path);
EstimationResult load_estimation_result(const std::string& path);

}  // namespace tollsafe
