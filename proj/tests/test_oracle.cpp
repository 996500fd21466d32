#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "tollsafe/kernel.hpp"
#include "tollsafe/oracle.hpp"

using namespace tollsafe;
using tollsafe::testing::make_state;

TEST_CASE("oracle: head-on unit squares close a 9 m face gap at 10 m/s") {
  auto s1 = make_state(0, 0, 0, 5, 1, 1, "a");
  auto s2 = make_state(10, 0, 180, 5, 1, 1, "b");
  OracleConfig oc;
  double t = oracle_ttc(s1, s2, oc);
  CHECK(std::fabs(t - 0.9) <= 2 * oc.dt);
}

TEST_CASE("oracle: parallel non-overlapping corridors never meet") {
  auto s1 = make_state(0, 0, 0, 5, 4, 2, "a");
  auto s2 = make_state(0, 10, 0, 15, 4, 2, "b");
  CHECK(std::isinf(oracle_ttc(s1, s2)));
}

TEST_CASE("oracle: halving dt moves a finite result by at most dt") {
  auto s1 = make_state(-20, 0, 0, 10, 4, 2, "a");
  auto s2 = make_state(-19.0, -3.2, 8, 10, 4, 2, "b");
  OracleConfig coarse;
  coarse.dt = 0.002;
  OracleConfig fine;
  fine.dt = 0.001;
  double tc = oracle_ttc(s1, s2, coarse);
  double tf = oracle_ttc(s1, s2, fine);
  REQUIRE(std::isfinite(tc));
  CHECK(std::fabs(tc - tf) <= coarse.dt);
}

TEST_CASE("oracle agrees with hand-built analytic scenes") {
  OracleConfig oc;

  SUBCASE("pure rear-end closing") {
    // gap between bumpers: 30 - 2.5 - 2.5 = 25 m, closing 5 m/s -> 5 s
    auto lead = make_state(30, 0, 0, 10, 5, 2, "l");
    auto follow = make_state(0, 0, 0, 15, 5, 2, "f");
    CHECK(std::fabs(oracle_ttc(lead, follow, oc) - 5.0) <= 2 * oc.dt);
  }

  SUBCASE("perpendicular crossing, first corner contact") {
    // Vehicle 2 moves up; its front edge reaches y = -1 (side of vehicle 1)
    // at t = (20 - 2 - 1) / 10 = 1.7 s, and vehicle 1 still spans x = 0 then.
    auto s1 = make_state(0, 0, 0, 1, 40, 2, "a");
    auto s2 = make_state(0, -20, 90, 10, 4, 2, "b");
    CHECK(std::fabs(oracle_ttc(s1, s2, oc) - 1.7) <= 2 * oc.dt);
  }

  SUBCASE("static obstacle straight ahead") {
    // front bumper at 2, obstacle near face at 20 - 1 = 19, speed 6 -> 17/6 s
    auto mover = make_state(0, 0, 0, 6, 4, 2, "m");
    auto block = make_state(20, 0, 90, 0, 2, 2, "s");
    CHECK(std::fabs(oracle_ttc(mover, block, oc) - 17.0 / 6.0) <= 2 * oc.dt);
  }

  SUBCASE("lateral drift sideswipe") {
    // Same forward speed, vehicle 2 angled 5 degrees toward vehicle 1's side.
    auto s1 = make_state(0, 0, 0, 10, 4, 2, "a");
    auto s2 = make_state(-1, -4, 5, 10.2, 4, 2, "b");
    double t = oracle_ttc(s1, s2, oc);
    REQUIRE(std::isfinite(t));
    auto r = modified_ttc(s1, s2);
    CHECK(std::fabs(r.ttc - t) <= 2 * oc.dt);
  }

  SUBCASE("diverging pair never collides") {
    auto s1 = make_state(0, 0, 0, 10, 4, 2, "a");
    auto s2 = make_state(0, -4, -8, 10, 4, 2, "b");
    CHECK(std::isinf(oracle_ttc(s1, s2, oc)));
  }
}

TEST_CASE("oracle grazing detector flags shallow contacts") {
  // Near-tangential pass: corridors barely brush.
  auto s1 = make_state(0, 0, 0, 10, 4, 2, "a");
  auto s2 = make_state(0, -2.005, 0, 14, 4, 2, "b");
  OracleConfig oc;
  CHECK(oracle_contact_is_grazing(s1, s2, oc));
}
