#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vrulabel/geomath.hpp"

using namespace vrulabel;
using namespace vrulabel::geomath;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  CHECK(wrap_angle(2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-12));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = d(rng);
    const double w = wrap_angle(a);
    CHECK(w > -kPi - 1e-12);
    CHECK(w <= kPi + 1e-12);
    CHECK(std::fabs(std::remainder(w - a, 2.0 * kPi)) < 1e-9);
  }
}

TEST_CASE("north displacement for 1e-5 deg latitude at the equator") {
  const GeoFix origin{0.0, 0.0, 0.0, 0.0};
  const GeoFix fix{0.0, 1e-5, 0.0, 0.0};
  const EnuPoint p = geodetic_to_enu(fix, origin);
  // Frozen reference from an independent geodesy implementation.
  CHECK(p.north_m == doctest::Approx(1.1057427582).epsilon(1e-8));
  CHECK(std::fabs(p.east_m) < 1e-9);
}

TEST_CASE("east displacement shrinks with cos(latitude)") {
  const double dlon = 1e-5;
  const GeoFix o0{0.0, 0.0, 0.0, 0.0};
  const GeoFix o60{0.0, 60.0, 0.0, 0.0};
  const double e0 = geodetic_to_enu({0.0, 0.0, dlon, 0.0}, o0).east_m;
  const double e60 = geodetic_to_enu({0.0, 60.0, dlon, 0.0}, o60).east_m;
  const double ratio = e60 / e0;
  CHECK(ratio == doctest::Approx(0.501259942664).epsilon(1e-9));
  CHECK(std::fabs(ratio - 0.5) < 0.003);  // cos(60 deg) up to ellipsoid effects
}

TEST_CASE("geodetic <-> enu round trip") {
  const GeoFix origin{0.0, 48.0, 9.0, 500.0};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-200.0, 200.0);
  for (int i = 0; i < 500; ++i) {
    const EnuPoint p{d(rng), d(rng), d(rng) / 10.0};
    const GeoFix fix = enu_to_geodetic(p, origin, 1.5);
    const EnuPoint back = geodetic_to_enu(fix, origin);
    CHECK(back.east_m == doctest::Approx(p.east_m).epsilon(1e-9));
    CHECK(back.north_m == doctest::Approx(p.north_m).epsilon(1e-9));
    CHECK(std::fabs(back.up_m - p.up_m) < 1e-6);
  }
}

TEST_CASE("non-finite geodetic input is rejected") {
  const GeoFix origin{0.0, 48.0, 9.0, 0.0};
  CHECK_THROWS_AS(
      geodetic_to_enu({0.0, std::numeric_limits<double>::quiet_NaN(), 9.0, 0.0},
                      origin),
      FormatError);
  CHECK_THROWS_AS(
      geodetic_to_enu({0.0, 48.0, std::numeric_limits<double>::infinity(), 0.0},
                      origin),
      FormatError);
}

TEST_CASE("enu <-> vehicle frame") {
  EgoPose pose;
  pose.position = {10.0, 5.0, 0.0};
  pose.yaw_rad = kPi / 2.0;  // facing north
  // A point 3 m north of the ego is 3 m ahead.
  const EnuPoint v = enu_to_vehicle({10.0, 8.0, 0.0}, pose);
  CHECK(v.east_m == doctest::Approx(3.0));  // x forward
  CHECK(v.north_m == doctest::Approx(0.0).epsilon(1e-12));
  // A point east of the ego is to the right (negative y).
  const EnuPoint v2 = enu_to_vehicle({12.0, 5.0, 0.0}, pose);
  CHECK(v2.east_m == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v2.north_m == doctest::Approx(-2.0));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    EgoPose rp;
    rp.position = {d(rng), d(rng), 0.0};
    rp.yaw_rad = d(rng) / 5.0;
    const EnuPoint p{d(rng), d(rng), 0.0};
    const EnuPoint rt = vehicle_to_enu(enu_to_vehicle(p, rp), rp);
    CHECK(rt.east_m == doctest::Approx(p.east_m).epsilon(1e-10));
    CHECK(rt.north_m == doctest::Approx(p.north_m).epsilon(1e-10));
  }
}

TEST_CASE("polar detection to vehicle frame") {
  SensorMount mount{0.3, -0.3, kPi / 4.0};
  RadarDetection d;
  d.range_m = 2.0;
  d.azimuth_rad = -kPi / 4.0;  // cancels mount yaw: straight along vehicle x
  const EnuPoint p = detection_to_vehicle(d, mount);
  CHECK(p.east_m == doctest::Approx(2.3));
  CHECK(p.north_m == doctest::Approx(-0.3));

  d.range_m = 0.0;
  CHECK_THROWS_AS(detection_to_vehicle(d, mount), FormatError);
  d.range_m = -1.0;
  CHECK_THROWS_AS(detection_to_vehicle(d, mount), FormatError);
}

TEST_CASE("doppler compensation zeroes a static world point") {
  EgoPose pose;
  pose.speed_mps = 7.3;
  pose.yaw_rad = 0.4;  // irrelevant: compensation happens in the vehicle frame
  SensorMount mount{0.3, 0.3, 0.1};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> az(-1.2, 1.2);
  std::uniform_real_distribution<double> rr(0.5, 30.0);
  for (int i = 0; i < 200; ++i) {
    RadarDetection d;
    d.range_m = rr(rng);
    d.azimuth_rad = az(rng);
    // Measured radial speed of a static point: the ego closes along the ray's
    // forward component, so the raw reading is -v * ray_x / |ray|.
    const double ray_x = std::cos(d.azimuth_rad + mount.yaw_rad);
    d.radial_speed_mps = -pose.speed_mps * ray_x;
    CHECK(std::fabs(ego_compensate_doppler(d, pose, mount)) < 1e-12);
  }
}
