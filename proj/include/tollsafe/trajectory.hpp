#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tollsafe/geometry.hpp"

namespace tollsafe {

enum class VehicleClass { PrivateCar, Taxi, GoodsVehicle, Bus, Motorcycle };
enum class Payment { Manual, Electronic };

const char* to_string(VehicleClass c);
const char* to_string(Payment p);
VehicleClass vehicle_class_from_string(const std::string& s);
Payment payment_from_string(const std::string& s);

struct TrajectoryFrame {
  long frame = 0;
  double x = 0.0;
  double y = 0.0;
  double length = 0.0;
  double width = 0.0;
  double heading_deg = 0.0;
};

/// Per-vehicle time series plus the kinematic series derived from it. All
/// derived vectors are frame-aligned once derive_kinematics has run;
/// avg_speed_1s is NaN until a full trailing window exists.
struct VehicleTrack {
  std::string vehicle_id;
  VehicleClass vclass = VehicleClass::PrivateCar;
  Payment payment = Payment::Manual;
  std::vector<TrajectoryFrame> frames;

  std::vector<double> speed;         // m/s, from centroid displacement
  std::vector<double> avg_speed_1s;  // trailing one-second mean
  std::vector<double> acceleration;  // m/s^2, central difference of speed
  std::vector<double> angular_speed; // deg/s magnitude
  std::vector<double> angular_speed_signed;  // clockwise positive
  bool derived = false;

  std::optional<size_t> index_of_frame(long frame) const;
};

struct LoadConfig {
  char delimiter = ',';
  int fps = 30;
  // Input column names; remap here when the detector uses different headers.
  std::map<std::string, std::string> columns = {
      {"frame", "frame"},       {"vehicle_id", "vehicle_id"},
      {"x", "x"},               {"y", "y"},
      {"length", "length"},     {"width", "width"},
      {"heading", "heading"},   {"class", "class"},
      {"payment", "payment"},
  };
};

struct LoadResult {
  std::vector<VehicleTrack> tracks;  // sorted by vehicle id, frames ascending
  std::vector<std::string> warnings;
};

/// Parse a delimited trajectory file, one row per (vehicle, frame).
/// Malformed rows and non-monotone frame indices are reported with their
/// line numbers. An empty file yields an empty collection and a warning.
LoadResult load_trajectories(const std::string& path, const LoadConfig& config = {});

/// Fill the derived kinematic series of a track in place: instantaneous
/// speed, trailing one-second average speed, acceleration, angular speed.
void derive_kinematics(VehicleTrack& track, int fps);

/// Instantaneous kinematic state of a track at a frame index (by frame
/// number); empty when the track has no such frame.
std::optional<KinematicState> state_at(const VehicleTrack& track, long frame);

/// All pairs of track indices whose centroids are within the gating radius
/// at the given frame.
std::vector<std::pair<size_t, size_t>> pair_candidates(
    const std::vector<VehicleTrack>& tracks, long frame, double gating_radius_m = 50.0);

}  // namespace tollsafe
