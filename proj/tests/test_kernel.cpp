#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "tollsafe/error.hpp"
#include "tollsafe/kernel.hpp"
#include "tollsafe/oracle.hpp"

using namespace tollsafe;
using tollsafe::testing::make_state;
using tollsafe::testing::random_crossing;

namespace {

double polygon_area(const OverlapRegion& r) {
  const Vec2 pts[4] = {r.a, r.b, r.c, r.d};
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += cross(pts[i], pts[(i + 1) % 4]);
  return std::fabs(acc) / 2.0;
}

}  // namespace

TEST_CASE("corners: axis-aligned footprint") {
  auto cs = corners(make_state(0, 0, 0, 10, 4, 2));
  CHECK(cs.A.x == doctest::Approx(2.0));
  CHECK(cs.A.y == doctest::Approx(1.0));
  CHECK(cs.B.x == doctest::Approx(2.0));
  CHECK(cs.B.y == doctest::Approx(-1.0));
  CHECK(cs.C.x == doctest::Approx(-2.0));
  CHECK(cs.C.y == doctest::Approx(-1.0));
  CHECK(cs.D.x == doctest::Approx(-2.0));
  CHECK(cs.D.y == doctest::Approx(1.0));
}

TEST_CASE("corners: reversed heading mirrors the labels") {
  auto cs = corners(make_state(0, 0, 180, 10, 4, 2));
  CHECK(cs.A.x == doctest::Approx(-2.0));
  CHECK(cs.A.y == doctest::Approx(-1.0));
  CHECK(cs.B.x == doctest::Approx(-2.0));
  CHECK(cs.B.y == doctest::Approx(1.0));
  CHECK(cs.C.x == doctest::Approx(2.0));
  CHECK(cs.C.y == doctest::Approx(1.0));
  CHECK(cs.D.x == doctest::Approx(2.0));
  CHECK(cs.D.y == doctest::Approx(-1.0));
}

TEST_CASE("corners: rotation by 90 degrees") {
  auto cs = corners(make_state(1, 1, 90, 10, 4, 2));
  CHECK(cs.A.x == doctest::Approx(0.0));
  CHECK(cs.A.y == doctest::Approx(3.0));
  CHECK(cs.B.x == doctest::Approx(2.0));
  CHECK(cs.B.y == doctest::Approx(3.0));
  CHECK(cs.C.x == doctest::Approx(2.0));
  CHECK(cs.C.y == doctest::Approx(-1.0));
  CHECK(cs.D.x == doctest::Approx(0.0));
  CHECK(cs.D.y == doctest::Approx(-1.0));
}

TEST_CASE("ttc_longitudinal: direct substitution") {
  // front bumpers at 30 and 0, leader length 5
  auto leader = make_state(27.5, 0, 0, 10, 5, 2, "lead");
  auto follower = make_state(-2.5, 0, 0, 15, 5, 2, "follow");
  CHECK(ttc_longitudinal(leader, follower) == doctest::Approx(5.0));
}

TEST_CASE("ttc_longitudinal: equal speeds never collide") {
  auto leader = make_state(27.5, 0, 0, 10, 5, 2);
  auto follower = make_state(-2.5, 0, 0, 10, 5, 2);
  CHECK(std::isinf(ttc_longitudinal(leader, follower)));
}

TEST_CASE("ttc_longitudinal: stopped leader") {
  // front bumpers at 12 and 0, leader length 4
  auto leader = make_state(10, 0, 0, 0, 4, 2);
  auto follower = make_state(-2, 0, 0, 8, 4, 2);
  CHECK(ttc_longitudinal(leader, follower) == doctest::Approx(1.0));
}

TEST_CASE("ttc_longitudinal: overlapping bumpers rejected") {
  auto leader = make_state(3, 0, 0, 10, 5, 2);
  auto follower = make_state(0, 0, 0, 15, 5, 2);
  CHECK_THROWS_AS(ttc_longitudinal(leader, follower), Error);
}

TEST_CASE("overlap_region: perpendicular unit corridors give a unit square") {
  auto s1 = make_state(-10, 0, 0, 5, 4, 1, "a");
  auto s2 = make_state(0, -10, 90, 5, 4, 1, "b");
  auto region = overlap_region(s1, s2);
  CHECK_FALSE(region.degenerate);
  CHECK(region.alpha_deg == doctest::Approx(90.0));
  CHECK(polygon_area(region) == doctest::Approx(1.0));
}

TEST_CASE("overlap_region: near-parallel paths are degenerate") {
  auto s1 = make_state(0, 0, 0, 5);
  auto s2 = make_state(-10, 0.5, 0.1, 5);
  auto region = overlap_region(s1, s2);
  CHECK(region.degenerate);
}

TEST_CASE("overlap_region: diverging corridors have no forward overlap") {
  // Both headed away from the crossing point of their side lines.
  auto s1 = make_state(10, 0, 0, 5, 4, 2, "a");
  auto s2 = make_state(2, 6, 8, 5, 4, 2, "b");
  CHECK_THROWS_WITH_AS(overlap_region(s1, s2),
                       doctest::Contains("EmptyOverlap"), Error);
}

TEST_CASE("arrival_times: distance over speed along the heading") {
  auto s1 = make_state(-10, 0, 0, 3, 4, 2, "a");
  auto s2 = make_state(0, -12, 90, 4, 4, 2, "b");
  auto region = overlap_region(s1, s2);
  auto times = arrival_times(s1, region, 1);

  // 1B sits at (-8, -1); corner a = right(1) x left(2) at x = -1 on y = -1.
  double dist_1B_a = region.a.x - (-8.0);
  CHECK(times.at({"1B", "a"}) == doctest::Approx(dist_1B_a / 3.0));

  // Rear corner trails the front corner by L / v on the same trace line.
  CHECK(times.at({"1C", "a"}) ==
        doctest::Approx(times.at({"1B", "a"}) + 4.0 / 3.0));
  CHECK(times.at({"1C", "d"}) ==
        doctest::Approx(times.at({"1B", "d"}) + 4.0 / 3.0));
}

TEST_CASE("arrival_times: region corner behind the vehicle is +inf") {
  auto s1 = make_state(20, 0, 0, 3, 4, 2, "a");   // already past the crossing
  auto s2 = make_state(0, -12, 90, 40, 4, 2, "b");
  OverlapRegion region;
  region.alpha_deg = 90.0;
  region.a = {-1, -1};
  region.b = {-1, 1};
  region.c = {1, 1};
  region.d = {1, -1};
  auto times = arrival_times(s1, region, 1);
  CHECK(std::isinf(times.at({"1B", "a"})));
}

TEST_CASE("arrival_times: zero speed rejected") {
  auto s1 = make_state(-10, 0, 0, 0, 4, 2);
  OverlapRegion region;
  region.a = {0, -1};
  region.b = {0, 1};
  region.c = {2, 1};
  region.d = {2, -1};
  CHECK_THROWS_AS(arrival_times(s1, region, 1), Error);
}

TEST_CASE("modified_ttc: collinear same-lane pair reduces to the longitudinal formula") {
  auto leader = make_state(27.5, 0, 0, 10, 5, 2, "lead");
  auto follower = make_state(-2.5, 0, 0, 15, 5, 2, "follow");
  auto r = modified_ttc(leader, follower);
  CHECK(r.ttc == doctest::Approx(5.0));
  CHECK(r.contact_class == ContactClass::FrontToRear);
  CHECK(r.leader_id == "lead");
  CHECK(r.ttc == ttc_longitudinal(leader, follower));  // exact reduction
}

TEST_CASE("modified_ttc: separating pair has no predicted contact") {
  auto s1 = make_state(10, 0, 0, 5, 4, 2, "a");
  auto s2 = make_state(2, 8, 8, 5, 4, 2, "b");
  auto r = modified_ttc(s1, s2);
  CHECK(std::isinf(r.ttc));
  CHECK(r.contact_class == ContactClass::None);
}

TEST_CASE("modified_ttc: crossing scenario matches the stepping oracle") {
  auto s1 = make_state(-20, 0, 0, 10, 4, 2, "a");
  auto s2 = make_state(-19.0, -3.2, 8, 10, 4, 2, "b");
  OracleConfig oc;
  double truth = oracle_ttc(s1, s2, oc);
  REQUIRE(std::isfinite(truth));
  auto r = modified_ttc(s1, s2);
  CHECK(std::fabs(r.ttc - truth) <= 2.0 * oc.dt);
}

TEST_CASE("modified_ttc: zero-speed vehicle acts as a static obstacle") {
  auto blocker = make_state(20, 0, 90, 0, 4, 2, "stopped");
  auto mover = make_state(0, 0, 0, 10, 4, 2, "moving");
  auto r = modified_ttc(mover, blocker);
  CHECK(std::isfinite(r.ttc));
  CHECK(r.leader_id == "stopped");
  OracleConfig oc;
  CHECK(std::fabs(r.ttc - oracle_ttc(mover, blocker, oc)) <= 2.0 * oc.dt);
}

TEST_CASE("classify: severity thresholds are strict") {
  TtcResult r;
  r.alpha_deg = 5.0;

  r.ttc = 1.2;
  r.contact_class = ContactClass::CornerToSide;
  auto [t1, s1] = classify(r);
  CHECK(t1 == ConflictType::Sideswipe);
  CHECK(s1 == ConflictSeverity::Severe);

  r.ttc = 2.0;
  r.contact_class = ContactClass::FrontToRear;
  auto [t2, s2] = classify(r);
  CHECK(t2 == ConflictType::RearEnd);
  CHECK(s2 == ConflictSeverity::Slight);

  r.ttc = kInfinity;
  r.contact_class = ContactClass::None;
  auto [t3, s3] = classify(r);
  CHECK_FALSE(t3.has_value());
  CHECK(s3 == ConflictSeverity::None);

  // boundary: exactly at the threshold is not a conflict of that level
  r.ttc = 1.5;
  r.contact_class = ContactClass::FrontToRear;
  CHECK(classify(r).second == ConflictSeverity::Slight);
  r.ttc = 3.0;
  CHECK(classify(r).second == ConflictSeverity::None);
}

TEST_CASE("classify: large intersecting angles are unsupported") {
  TtcResult r;
  r.ttc = 1.0;
  r.alpha_deg = 45.0;
  r.contact_class = ContactClass::CornerToSide;
  CHECK(classify(r).first == ConflictType::Unsupported);
}

TEST_CASE("property: ttc is symmetric in the argument order") {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 200) {
    auto [s1, s2] = random_crossing(rng);
    if (rectangles_overlap(corners(s1), corners(s2))) continue;
    auto a = modified_ttc(s1, s2);
    auto b = modified_ttc(s2, s1);
    CHECK(a.ttc == b.ttc);
    CHECK(a.contact_class == b.contact_class);
    CHECK(a.leader_id == b.leader_id);
    ++checked;
  }
}

TEST_CASE("property: rigid motions leave the result unchanged") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  std::uniform_real_distribution<double> turn(0.0, 360.0);
  int checked = 0;
  while (checked < 100) {
    auto [s1, s2] = random_crossing(rng);
    if (rectangles_overlap(corners(s1), corners(s2))) continue;
    double dx = shift(rng), dy = shift(rng), rot = turn(rng);
    double cr = std::cos(deg2rad(rot)), sr = std::sin(deg2rad(rot));
    auto moved = [&](const KinematicState& s) {
      KinematicState m = s;
      m.x = cr * s.x - sr * s.y + dx;
      m.y = sr * s.x + cr * s.y + dy;
      m.heading_deg = normalize_heading(s.heading_deg + rot);
      return m;
    };
    auto base = modified_ttc(s1, s2);
    auto rigid = modified_ttc(moved(s1), moved(s2));
    if (std::isfinite(base.ttc)) {
      CHECK(std::fabs(base.ttc - rigid.ttc) <= 1e-9);
      CHECK(base.contact_class == rigid.contact_class);
    } else {
      CHECK(std::isinf(rigid.ttc));
    }
    CHECK(base.alpha_deg == doctest::Approx(rigid.alpha_deg));
    ++checked;
  }
}

TEST_CASE("property: scaling both speeds by k scales ttc by 1/k") {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 100) {
    auto [s1, s2] = random_crossing(rng);
    if (rectangles_overlap(corners(s1), corners(s2))) continue;
    auto base = modified_ttc(s1, s2);
    if (!std::isfinite(base.ttc)) continue;
    double k = 3.0;
    auto f1 = s1, f2 = s2;
    f1.speed *= k;
    f2.speed *= k;
    auto fast = modified_ttc(f1, f2);
    CHECK(fast.ttc == doctest::Approx(base.ttc / k).epsilon(1e-9));
    ++checked;
  }
}

TEST_CASE("property: severity is non-increasing in ttc") {
  SeverityThresholds th;
  auto severity_rank = [&](double ttc) {
    TtcResult r;
    r.ttc = ttc;
    r.contact_class = ContactClass::FrontToRear;
    switch (classify(r, th).second) {
      case ConflictSeverity::Severe: return 2;
      case ConflictSeverity::Slight: return 1;
      default: return 0;
    }
  };
  double prev = 3;
  for (double ttc : {0.1, 0.5, 1.49, 1.5, 2.0, 2.99, 3.0, 10.0}) {
    double cur = severity_rank(ttc);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("property: parallel overlap reduces exactly to ttc_longitudinal") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double h = u01(rng) * 360.0;
    double gap = 5.0 + 40.0 * u01(rng);
    double vl = 1.0 + 10.0 * u01(rng);
    double vf = vl + 0.5 + 10.0 * u01(rng);
    Vec2 u = heading_unit(h);
    auto leader = make_state(u.x * gap, u.y * gap, h, vl, 4.5, 2, "lead");
    auto follower = make_state(0, 0, h, vf, 4.5, 2, "follow");
    auto r = modified_ttc(leader, follower);
    CHECK(r.ttc == ttc_longitudinal(leader, follower));
    CHECK(r.contact_class == ContactClass::FrontToRear);
    CHECK(r.leader_id == "lead");
  }
}

TEST_CASE("kernel vs oracle on randomized crossings (smoke sample)") {
  std::mt19937_64 rng(2024);
  OracleConfig oc;
  int checked = 0, skipped = 0;
  while (checked < 100) {
    auto [s1, s2] = random_crossing(rng);
    if (rectangles_overlap(corners(s1), corners(s2))) continue;
    double truth = oracle_ttc(s1, s2, oc);
    auto r = modified_ttc(s1, s2);
    bool both_finite = std::isfinite(truth) && std::isfinite(r.ttc);
    if (std::isfinite(truth) != std::isfinite(r.ttc)) {
      if (oracle_contact_is_grazing(s1, s2, oc)) {
        ++skipped;
        continue;
      }
      CHECK_MESSAGE(false, "classification mismatch: oracle=", truth,
                    " kernel=", r.ttc);
    } else if (both_finite) {
      CHECK(std::fabs(truth - r.ttc) <= 2.0 * oc.dt);
    }
    ++checked;
  }
  CHECK(skipped < 20);
}
