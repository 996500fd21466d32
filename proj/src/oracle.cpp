#include "tollsafe/oracle.hpp"

#include <algorithm>

namespace tollsafe {

namespace {

CornerSet advance(const KinematicState& s, double t) {
  KinematicState moved = s;
  Vec2 v = s.velocity();
  moved.x += v.x * t;
  moved.y += v.y * t;
  return corners(moved);
}

}  // namespace

double oracle_ttc(const KinematicState& s1, const KinematicState& s2,
                  const OracleConfig& config) {
  long steps = static_cast<long>(config.horizon / config.dt);
  for (long i = 0; i <= steps; ++i) {
    double t = i * config.dt;
    if (rectangles_overlap(advance(s1, t), advance(s2, t))) return t;
  }
  return kInfinity;
}

bool oracle_contact_is_grazing(const KinematicState& s1, const KinematicState& s2,
                               const OracleConfig& config) {
  double first = oracle_ttc(s1, s2, config);
  double max_depth = -kInfinity;
  if (std::isfinite(first)) {
    long probe_steps = static_cast<long>(config.grazing_window / config.dt);
    for (long i = 0; i <= probe_steps; ++i) {
      double t = first + i * config.dt;
      max_depth = std::max(max_depth,
                           penetration_depth(advance(s1, t), advance(s2, t)));
    }
    return max_depth < config.penetration_tol;
  }
  // No contact: a near pass within tolerance of touching still counts as grazing.
  long steps = static_cast<long>(config.horizon / config.dt);
  for (long i = 0; i <= steps; ++i) {
    double t = i * config.dt;
    max_depth = std::max(max_depth,
                         penetration_depth(advance(s1, t), advance(s2, t)));
  }
  return max_depth > -config.penetration_tol;
}

}  // namespace tollsafe
