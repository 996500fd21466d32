#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "tollsafe/geometry.hpp"

namespace tollsafe {

enum class ContactClass { FrontToRear, CornerToSide, None };
enum class ConflictSeverity { None, Slight, Severe };
enum class ConflictType { RearEnd, Sideswipe, Unsupported };

struct KernelConfig {
  double parallel_cutoff_deg = 0.5;  // below this the paths count as parallel
  double unsupported_angle_deg = 30.0;
  double denominator_epsilon = 1e-9;  // degenerate interpolation guard, seconds
};

struct SeverityThresholds {
  double slight_s = 3.0;
  double severe_s = 1.5;
};

/// Time for one vehicle corner to reach a region corner lying on its trace
/// line. Keys are (vehicle corner, region corner), e.g. ("1B", "a").
/// Entries behind the corner are +infinity.
using ArrivalTimes = std::map<std::pair<std::string, std::string>, double>;

struct TtcResult {
  double ttc = kInfinity;  // seconds, (0, +inf]
  std::string leader_id;   // vehicle that arrives at the overlap region first
  ContactClass contact_class = ContactClass::None;
  double alpha_deg = 0.0;
};

/// Eq.-style longitudinal TTC for a collinear leader/follower pair:
/// (x_l - x_f - L_l) / (v_f - v_l) when the follower is faster, else +inf.
/// Throws (Data) when the bumpers already overlap.
double ttc_longitudinal(const KinematicState& leader, const KinematicState& follower);

/// Forward-corridor intersection. Throws (Data) with "EmptyOverlap" when the
/// corridors do not intersect ahead of both vehicles. Both speeds must be > 0.
OverlapRegion overlap_region(const KinematicState& s1, const KinematicState& s2,
                             const KernelConfig& config = {});

/// Arrival times of the corners of `state` (prefix "1" or "2") at the region
/// corners lying on their trace lines. Throws (Data) on zero speed.
ArrivalTimes arrival_times(const KinematicState& state, const OverlapRegion& region,
                           int vehicle_index);

/// Footprint-aware two-dimensional TTC: earliest predicted corner/edge contact
/// under constant speed and heading. Near-parallel inputs reduce to
/// ttc_longitudinal; no predicted contact gives ttc = +inf, contact none.
TtcResult modified_ttc(const KinematicState& s1, const KinematicState& s2,
                       const KernelConfig& config = {});

/// Conflict type from the contact class (empty when no contact is predicted)
/// and severity from the TTC against the thresholds (strict inequalities).
std::pair<std::optional<ConflictType>, ConflictSeverity> classify(
    const TtcResult& result, const SeverityThresholds& thresholds = {},
    const KernelConfig& config = {});

const char* to_string(ContactClass c);
const char* to_string(ConflictSeverity s);
const char* to_string(ConflictType t);

}  // namespace tollsafe
