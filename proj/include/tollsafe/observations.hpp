#pragma once

#include <string>
#include <vector>

#include "tollsafe/kernel.hpp"
#include "tollsafe/trajectory.hpp"
#include "tollsafe/zones.hpp"

namespace tollsafe {

struct RoleCovariates {
  double avg_speed = 0.0;      // trailing one-second mean, m/s
  double acceleration = 0.0;   // m/s^2
  double angular_speed = 0.0;  // deg/s magnitude
  VehicleClass vclass = VehicleClass::PrivateCar;
};

/// One (pair, time) record: conflict family, outcome, and the covariates
/// used for estimation. Covariates deliberately carry the averaged speed,
/// never the instantaneous speed that produced the TTC.
struct InteractionObservation {
  std::string group_id;  // canonical ordered vehicle pair "idA|idB"
  long frame = 0;
  ConflictType family = ConflictType::RearEnd;
  ConflictSeverity outcome = ConflictSeverity::None;
  double ttc = kInfinity;
  std::string zone;  // containing zone of the overlap centroid, may be empty
  int electronic_involved = 0;
  int zone1 = 0;
  int zone2 = 0;
  RoleCovariates leader;
  RoleCovariates follower;
};

struct CongestionFilterConfig {
  double window_seconds = 10.0;
  double speed_threshold = 3.0;  // window congested below this mean speed, m/s
};

struct SamplingConfig {
  int stride_frames = 30;  // one observation per pair per stride
  double gating_radius_m = 50.0;
};

struct BuildConfig {
  KernelConfig kernel;
  SeverityThresholds thresholds;
  CongestionFilterConfig congestion;
  SamplingConfig sampling;
  int fps = 30;
};

/// Evaluate every candidate pair at every sampled frame, label outcomes from
/// the modified TTC, and emit observations sorted by (group, frame). Frames
/// in congested windows and overlaps outside the study area are dropped;
/// kernel rejections (e.g. already-overlapping detections) are skipped and
/// reported in `skipped` when provided.
std::vector<InteractionObservation> build_observations(
    std::vector<VehicleTrack>& tracks, const ZoneMap& zones,
    const BuildConfig& config, std::vector<std::string>* skipped = nullptr);

struct CovariateSummary {
  std::string name;
  double mean, sd, min, max;  // sample SD (n - 1)
};

struct FamilySummary {
  ConflictType family = ConflictType::RearEnd;
  std::vector<CovariateSummary> covariates;
  size_t count_none = 0, count_slight = 0, count_severe = 0;
  size_t total() const { return count_none + count_slight + count_severe; }
};

/// Per-family descriptive statistics in the layout of the dataset table:
/// covariate mean/SD/min/max plus outcome counts. Throws (Data) when empty.
std::vector<FamilySummary> summarize_dataset(
    const std::vector<InteractionObservation>& observations);

/// Numeric value of a named derived field of an observation (the covariate
/// names used by summaries and model specs, e.g. "leader_avg_speed",
/// "zone1", "follower_bus"). Throws (Config) for unknown names.
double observation_field(const InteractionObservation& o, const std::string& name);

/// Fixed column order used by the delimited observation table.
const std::vector<std::string>& observation_columns();

void write_observations(const std::vector<InteractionObservation>& observations,
                        const std::string& path);
std::vector<InteractionObservation> read_observations(const std::string& path);

std::string render_summary(const std::vector<FamilySummary>& summaries);

}  // namespace tollsafe
