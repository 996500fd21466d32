#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace tollsafe {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Heading folded into [0, 360).
double normalize_heading(double deg);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Unit vector for a heading in degrees (measured from the +x axis).
inline Vec2 heading_unit(double heading_deg) {
  double r = deg2rad(heading_deg);
  return {std::cos(r), std::sin(r)};
}

/// Left-hand normal of a heading (90 deg counter-clockwise).
inline Vec2 heading_left(double heading_deg) {
  Vec2 u = heading_unit(heading_deg);
  return {-u.y, u.x};
}

/// One vehicle's oriented rectangular footprint with instantaneous motion.
struct KinematicState {
  double x = 0.0;            // centroid, meters
  double y = 0.0;            // centroid, meters
  double heading_deg = 0.0;  // [0, 360), from +x axis
  double speed = 0.0;        // m/s along heading, >= 0
  double length = 4.0;       // meters, > 0
  double width = 2.0;        // meters, > 0
  std::string vehicle_id;

  Vec2 centroid() const { return {x, y}; }
  Vec2 velocity() const { return heading_unit(heading_deg) * speed; }
};

/// Footprint corners. Relative to the heading: A front-left, B front-right,
/// C rear-right, D rear-left.
struct CornerSet {
  Vec2 A, B, C, D;

  std::array<Vec2, 4> all() const { return {A, B, C, D}; }
};

CornerSet corners(const KinematicState& state);

/// Intersection of the two forward corridors. Corner labels follow the
/// arrival-time bookkeeping: a = right side of vehicle 1 x left side of
/// vehicle 2, b = left x left, c = left x right, d = right x right.
struct OverlapRegion {
  Vec2 a, b, c, d;
  double alpha_deg = 0.0;  // intersecting angle, (0, 180)
  bool degenerate = false; // near-parallel paths, corners meaningless
};

/// Separating-axis overlap test for two oriented rectangles.
bool rectangles_overlap(const CornerSet& r1, const CornerSet& r2);

/// Largest penetration depth if overlapping (min over the four candidate
/// axes), otherwise negative: the smallest separating gap, negated.
double penetration_depth(const CornerSet& r1, const CornerSet& r2);

/// Point-in-convex-polygon test, boundary counts as inside.
bool point_in_polygon(Vec2 p, const std::vector<Vec2>& polygon);

}  // namespace tollsafe
