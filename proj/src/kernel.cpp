#include "tollsafe/kernel.hpp"

#include <algorithm>
#include <vector>

#include "tollsafe/error.hpp"

namespace tollsafe {

namespace {

void validate_state(const KinematicState& s) {
  if (!(s.length > 0.0) || !(s.width > 0.0))
    throw data_error("invalid state: length and width must be positive (vehicle " +
                     s.vehicle_id + ")");
  if (!(s.speed >= 0.0))
    throw data_error("invalid state: speed must be non-negative (vehicle " +
                     s.vehicle_id + ")");
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.heading_deg))
    throw data_error("invalid state: non-finite pose (vehicle " + s.vehicle_id + ")");
}

// Intersecting angle of the two paths, folded into (0, 180).
double intersecting_angle(const KinematicState& s1, const KinematicState& s2) {
  double diff = std::fabs(normalize_heading(s1.heading_deg) -
                          normalize_heading(s2.heading_deg));
  if (diff > 180.0) diff = 360.0 - diff;
  return diff;
}

Vec2 intersect_lines(Vec2 p1, Vec2 d1, Vec2 p2, Vec2 d2) {
  double denom = cross(d1, d2);
  double t = cross(p2 - p1, d2) / denom;
  return p1 + d1 * t;
}

// Clip a convex polygon against the half-plane dot(p - origin, dir) >= 0.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 origin, Vec2 dir) {
  std::vector<Vec2> out;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    Vec2 cur = poly[i];
    Vec2 nxt = poly[(i + 1) % n];
    double fc = dot(cur - origin, dir);
    double fn = dot(nxt - origin, dir);
    if (fc >= 0.0) out.push_back(cur);
    if ((fc >= 0.0) != (fn >= 0.0)) {
      double t = fc / (fc - fn);
      out.push_back(cur + (nxt - cur) * t);
    }
  }
  return out;
}

struct Body {
  CornerSet c;
  Vec2 vel;
};

struct ContactEvent {
  double t = kInfinity;
  ContactClass cls = ContactClass::None;
};

// Crossing times of every vertex of `vi` against every edge of `vj` under the
// relative (constant) velocity. A crossing whose point lies within the edge
// segment is a genuine boundary touch; the minimum over all of them is the
// first contact. Side edges give corner-to-side contacts, front/rear edges
// front-to-rear ones.
void collect_events(const Body& vi, const Body& vj, std::vector<ContactEvent>& out) {
  struct Edge {
    Vec2 a, b;
    ContactClass cls;
  };
  const std::array<Edge, 4> edges = {
      Edge{vj.c.A, vj.c.B, ContactClass::FrontToRear},   // front
      Edge{vj.c.D, vj.c.C, ContactClass::FrontToRear},   // rear
      Edge{vj.c.A, vj.c.D, ContactClass::CornerToSide},  // left side
      Edge{vj.c.B, vj.c.C, ContactClass::CornerToSide},  // right side
  };
  const Vec2 vrel = vi.vel - vj.vel;
  for (Vec2 p : vi.c.all()) {
    for (const Edge& e : edges) {
      Vec2 dir = e.b - e.a;
      double len = norm(dir);
      Vec2 tangent{dir.x / len, dir.y / len};
      Vec2 normal{-tangent.y, tangent.x};
      double vn = dot(vrel, normal);
      if (std::fabs(vn) < 1e-15) continue;  // sliding parallel to the edge line
      double t = -dot(p - e.a, normal) / vn;
      if (t < 0.0) continue;
      double s = dot(p - e.a + vrel * t, tangent);
      if (s >= -1e-9 && s <= len + 1e-9) out.push_back({t, e.cls});
    }
  }
}

// Signed time for the front corners of `s` to reach the overlap region
// corners lying on their trace lines; used only to pick the leader.
double entry_time(const KinematicState& s, const OverlapRegion& region,
                  bool first_vehicle) {
  CornerSet cs = corners(s);
  Vec2 u = heading_unit(s.heading_deg);
  // Left side of vehicle 1 carries {b, c}, right side {a, d};
  // left side of vehicle 2 carries {a, b}, right side {c, d}.
  Vec2 left_targets[2], right_targets[2];
  if (first_vehicle) {
    left_targets[0] = region.b; left_targets[1] = region.c;
    right_targets[0] = region.a; right_targets[1] = region.d;
  } else {
    left_targets[0] = region.a; left_targets[1] = region.b;
    right_targets[0] = region.c; right_targets[1] = region.d;
  }
  double t = kInfinity;
  for (Vec2 q : left_targets) t = std::min(t, dot(q - cs.A, u) / s.speed);
  for (Vec2 q : right_targets) t = std::min(t, dot(q - cs.B, u) / s.speed);
  return t;
}

TtcResult longitudinal_route(const KinematicState& s1, const KinematicState& s2,
                             double alpha) {
  // Project everything onto vehicle 1's axis; at this point the headings
  // differ by less than the parallel cutoff.
  Vec2 u = heading_unit(s1.heading_deg);
  Vec2 n = heading_left(s1.heading_deg);
  double front1 = dot(s1.centroid(), u) + s1.length / 2.0;
  double front2 = dot(s2.centroid(), u) + s2.length / 2.0;
  const KinematicState& leader = front1 >= front2 ? s1 : s2;
  const KinematicState& follower = front1 >= front2 ? s2 : s1;

  TtcResult r;
  r.alpha_deg = alpha;
  r.leader_id = leader.vehicle_id;

  double lat1 = dot(s1.centroid(), n);
  double lat2 = dot(s2.centroid(), n);
  bool lateral_overlap =
      std::fabs(lat1 - lat2) < (s1.width + s2.width) / 2.0;
  if (!lateral_overlap) return r;  // no shared corridor: no predicted contact

  double ttc = ttc_longitudinal(leader, follower);
  if (std::isfinite(ttc)) {
    r.ttc = ttc;
    r.contact_class = ContactClass::FrontToRear;
  }
  return r;
}

}  // namespace

double ttc_longitudinal(const KinematicState& leader, const KinematicState& follower) {
  validate_state(leader);
  validate_state(follower);
  Vec2 u = heading_unit(leader.heading_deg);
  double x_l = dot(leader.centroid(), u) + leader.length / 2.0;
  double x_f = dot(follower.centroid(), u) + follower.length / 2.0;
  double v_l = dot(leader.velocity(), u);
  double v_f = dot(follower.velocity(), u);
  double gap = x_l - x_f - leader.length;
  if (gap < 0.0)
    throw data_error("OverlappingInput: follower front bumper is past the leader rear");
  if (v_f <= v_l) return kInfinity;
  return gap / (v_f - v_l);
}

OverlapRegion overlap_region(const KinematicState& s1, const KinematicState& s2,
                             const KernelConfig& config) {
  validate_state(s1);
  validate_state(s2);
  if (!(s1.speed > 0.0) || !(s2.speed > 0.0))
    throw data_error("ZeroSpeed: overlap region requires both speeds > 0");

  OverlapRegion region;
  region.alpha_deg = intersecting_angle(s1, s2);
  if (std::min(region.alpha_deg, 180.0 - region.alpha_deg) < config.parallel_cutoff_deg) {
    region.degenerate = true;
    return region;
  }

  CornerSet c1 = corners(s1);
  CornerSet c2 = corners(s2);
  Vec2 u1 = heading_unit(s1.heading_deg);
  Vec2 u2 = heading_unit(s2.heading_deg);
  // Side lines: left through A, right through B, both along the heading.
  region.a = intersect_lines(c1.B, u1, c2.A, u2);  // right(1) x left(2)
  region.b = intersect_lines(c1.A, u1, c2.A, u2);  // left(1) x left(2)
  region.c = intersect_lines(c1.A, u1, c2.B, u2);  // left(1) x right(2)
  region.d = intersect_lines(c1.B, u1, c2.B, u2);  // right(1) x right(2)

  // The corridors start at the front edges: the parallelogram must keep some
  // area ahead of both of them.
  std::vector<Vec2> poly = {region.a, region.b, region.c, region.d};
  poly = clip_halfplane(poly, c1.A, u1);
  if (poly.size() >= 3) poly = clip_halfplane(poly, c2.A, u2);
  if (poly.size() < 3)
    throw data_error("EmptyOverlap: corridors do not intersect ahead of both vehicles");
  return region;
}

ArrivalTimes arrival_times(const KinematicState& state, const OverlapRegion& region,
                           int vehicle_index) {
  validate_state(state);
  if (!(state.speed > 0.0)) throw data_error("ZeroSpeed: arrival times undefined");
  if (region.degenerate)
    throw data_error("degenerate region has no labeled corners");

  CornerSet cs = corners(state);
  Vec2 u = heading_unit(state.heading_deg);
  std::string prefix = vehicle_index == 1 ? "1" : "2";

  struct Entry {
    const char* corner;
    Vec2 position;
    std::pair<const char*, Vec2> targets[2];
  };
  std::vector<Entry> entries;
  if (vehicle_index == 1) {
    entries = {
        {"A", cs.A, {{"b", region.b}, {"c", region.c}}},
        {"D", cs.D, {{"b", region.b}, {"c", region.c}}},
        {"B", cs.B, {{"a", region.a}, {"d", region.d}}},
        {"C", cs.C, {{"a", region.a}, {"d", region.d}}},
    };
  } else {
    entries = {
        {"A", cs.A, {{"a", region.a}, {"b", region.b}}},
        {"D", cs.D, {{"a", region.a}, {"b", region.b}}},
        {"B", cs.B, {{"c", region.c}, {"d", region.d}}},
        {"C", cs.C, {{"c", region.c}, {"d", region.d}}},
    };
  }

  ArrivalTimes times;
  for (const Entry& e : entries) {
    for (const auto& [label, q] : e.targets) {
      double t = dot(q - e.position, u) / state.speed;
      times[{prefix + e.corner, label}] = t >= 0.0 ? t : kInfinity;
    }
  }
  return times;
}

TtcResult modified_ttc(const KinematicState& s1, const KinematicState& s2,
                       const KernelConfig& config) {
  validate_state(s1);
  validate_state(s2);
  double alpha = intersecting_angle(s1, s2);

  CornerSet c1 = corners(s1);
  CornerSet c2 = corners(s2);
  if (rectangles_overlap(c1, c2))
    throw data_error("OverlappingInput: footprints intersect at the observation instant");

  if (alpha < config.parallel_cutoff_deg && s1.speed > 0.0 && s2.speed > 0.0)
    return longitudinal_route(s1, s2, alpha);

  Body b1{c1, s1.velocity()};
  Body b2{c2, s2.velocity()};
  std::vector<ContactEvent> events;
  events.reserve(32);
  collect_events(b1, b2, events);
  collect_events(b2, b1, events);

  TtcResult r;
  r.alpha_deg = alpha;

  double best = kInfinity;
  for (const ContactEvent& e : events) best = std::min(best, e.t);
  if (std::isfinite(best)) {
    r.ttc = best;
    // Equal-time side and rear/front crossings count as front-to-rear.
    bool front_rear = false;
    for (const ContactEvent& e : events)
      if (e.t - best <= config.denominator_epsilon && e.cls == ContactClass::FrontToRear)
        front_rear = true;
    r.contact_class = front_rear ? ContactClass::FrontToRear : ContactClass::CornerToSide;
  }

  // Leader: vehicle arriving at the overlapping area first.
  if (s1.speed > 0.0 && s2.speed > 0.0 &&
      std::min(alpha, 180.0 - alpha) >= config.parallel_cutoff_deg) {
    Vec2 u1 = heading_unit(s1.heading_deg);
    Vec2 u2 = heading_unit(s2.heading_deg);
    OverlapRegion region;
    region.alpha_deg = alpha;
    region.a = intersect_lines(c1.B, u1, c2.A, u2);
    region.b = intersect_lines(c1.A, u1, c2.A, u2);
    region.c = intersect_lines(c1.A, u1, c2.B, u2);
    region.d = intersect_lines(c1.B, u1, c2.B, u2);
    double e1 = entry_time(s1, region, true);
    double e2 = entry_time(s2, region, false);
    r.leader_id = e1 <= e2 ? s1.vehicle_id : s2.vehicle_id;
  } else if (s1.speed == 0.0) {
    r.leader_id = s1.vehicle_id;  // static obstacle already occupies its area
  } else if (s2.speed == 0.0) {
    r.leader_id = s2.vehicle_id;
  } else {
    // Near-opposite headings: the vehicle closer to the midpoint leads.
    Vec2 mid = (s1.centroid() + s2.centroid()) * 0.5;
    double d1 = dot(mid - s1.centroid(), heading_unit(s1.heading_deg)) / s1.speed;
    double d2 = dot(mid - s2.centroid(), heading_unit(s2.heading_deg)) / s2.speed;
    r.leader_id = d1 <= d2 ? s1.vehicle_id : s2.vehicle_id;
  }
  return r;
}

std::pair<std::optional<ConflictType>, ConflictSeverity> classify(
    const TtcResult& result, const SeverityThresholds& thresholds,
    const KernelConfig& config) {
  ConflictSeverity severity = ConflictSeverity::None;
  if (result.ttc < thresholds.severe_s)
    severity = ConflictSeverity::Severe;
  else if (result.ttc < thresholds.slight_s)
    severity = ConflictSeverity::Slight;

  std::optional<ConflictType> type;
  if (result.contact_class != ContactClass::None) {
    if (result.alpha_deg >= config.unsupported_angle_deg)
      type = ConflictType::Unsupported;
    else if (result.contact_class == ContactClass::FrontToRear)
      type = ConflictType::RearEnd;
    else
      type = ConflictType::Sideswipe;
  }
  return {type, severity};
}

const char* to_string(ContactClass c) {
  switch (c) {
    case ContactClass::FrontToRear: return "front_to_rear";
    case ContactClass::CornerToSide: return "corner_to_side";
    default: return "none";
  }
}

const char* to_string(ConflictSeverity s) {
  switch (s) {
    case ConflictSeverity::Slight: return "slight";
    case ConflictSeverity::Severe: return "severe";
    default: return "none";
  }
}

const char* to_string(ConflictType t) {
  switch (t) {
    case ConflictType::RearEnd: return "rear_end";
    case ConflictType::Sideswipe: return "sideswipe";
    default: return "unsupported";
  }
}

}  // namespace tollsafe
