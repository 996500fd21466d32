#pragma once

#include "tollsafe/geometry.hpp"

namespace tollsafe {

struct OracleConfig {
  double dt = 0.001;              // seconds per step
  double horizon = 30.0;          // seconds
  double penetration_tol = 0.01;  // meters; shallower contacts count as grazing
  double grazing_window = 0.05;   // seconds after first contact to probe depth
};

/// Brute-force first-contact time: advance both footprints at constant
/// velocity in dt steps and report the first step where the separating-axis
/// test finds overlap; +infinity if none within the horizon.
double oracle_ttc(const KinematicState& s1, const KinematicState& s2,
                  const OracleConfig& config = {});

/// True when the contact found by oracle_ttc never penetrates deeper than
/// penetration_tol within grazing_window after first contact (or when there
/// is no contact at all but the closest approach comes within the tolerance).
bool oracle_contact_is_grazing(const KinematicState& s1, const KinematicState& s2,
                               const OracleConfig& config = {});

}  // namespace tollsafe
