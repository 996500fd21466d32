#include "tollsafe/geometry.hpp"

#include <algorithm>

namespace tollsafe {

double normalize_heading(double deg) {
  double h = std::fmod(deg, 360.0);
  if (h < 0.0) h += 360.0;
  if (h == 360.0) h = 0.0;
  return h;
}

CornerSet corners(const KinematicState& s) {
  Vec2 c = s.centroid();
  Vec2 u = heading_unit(s.heading_deg);
  Vec2 n = heading_left(s.heading_deg);
  Vec2 half_len = u * (s.length / 2.0);
  Vec2 half_wid = n * (s.width / 2.0);
  CornerSet cs;
  cs.A = c + half_len + half_wid;  // front-left
  cs.B = c + half_len - half_wid;  // front-right
  cs.C = c - half_len - half_wid;  // rear-right
  cs.D = c - half_len + half_wid;  // rear-left
  return cs;
}

namespace {

// Interval of a rectangle projected onto an axis.
std::pair<double, double> project(const CornerSet& r, Vec2 axis) {
  double lo = kInfinity, hi = -kInfinity;
  for (Vec2 p : r.all()) {
    double v = dot(p, axis);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

bool rectangles_overlap(const CornerSet& r1, const CornerSet& r2) {
  return penetration_depth(r1, r2) > 0.0;
}

double penetration_depth(const CornerSet& r1, const CornerSet& r2) {
  const std::array<Vec2, 4> axes = {
      r1.B - r1.A, r1.D - r1.A, r2.B - r2.A, r2.D - r2.A};
  double depth = kInfinity;
  for (Vec2 raw : axes) {
    double len = norm(raw);
    if (len <= 0.0) continue;
    Vec2 axis{raw.x / len, raw.y / len};
    auto [lo1, hi1] = project(r1, axis);
    auto [lo2, hi2] = project(r2, axis);
    double overlap = std::min(hi1, hi2) - std::max(lo1, lo2);
    depth = std::min(depth, overlap);
  }
  return depth;
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
  size_t n = poly.size();
  if (n < 3) return false;
  // Boundary counts as inside.
  constexpr double eps = 1e-12;
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    Vec2 a = poly[j], b = poly[i];
    Vec2 ab = b - a;
    double seg_len2 = dot(ab, ab);
    if (seg_len2 > 0.0) {
      double t = std::clamp(dot(p - a, ab) / seg_len2, 0.0, 1.0);
      Vec2 closest = a + ab * t;
      if (norm(p - closest) <= eps) return true;
    }
    bool crosses = (a.y > p.y) != (b.y > p.y);
    if (crosses) {
      double x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

}  // namespace tollsafe
