#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vrulabel/regions.hpp"

using namespace vrulabel;
using namespace vrulabel::regions;

namespace {

MotionEstimate motion(double speed, double yaw_rate, double yaw = 0.0,
                      bool stationary = false) {
  MotionEstimate m;
  m.speed_mps = speed;
  m.yaw_rate_rps = yaw_rate;
  m.yaw_rad = yaw;
  m.stationary = stationary;
  return m;
}

}  // namespace

TEST_CASE("pedestrian axis lengths across the speed / yaw-rate grid") {
  const EnuPoint c{0.0, 0.0, 0.0};
  const struct {
    double speed, expect_major;
  } speed_rows[] = {{0.05, 1.55}, {0.5, 2.0}, {1.0, 2.5}, {3.0, 2.5}};
  const struct {
    double rate, expect_minor;
  } rate_rows[] = {{0.0, 1.2}, {0.1, 1.7}, {0.2, 2.2}, {1.0, 2.2}};
  for (const auto& sr : speed_rows) {
    for (const auto& rr : rate_rows) {
      const auto region = pedestrian_region(c, motion(sr.speed, rr.rate));
      const auto* e = std::get_if<Ellipse>(&region);
      REQUIRE(e != nullptr);
      CHECK(std::fabs(e->ax_major_m - sr.expect_major) < 1e-12);
      CHECK(std::fabs(e->ax_minor_m - rr.expect_minor) < 1e-12);
    }
  }
  // Negative yaw rate grows the minor axis just the same.
  const auto neg = pedestrian_region(c, motion(0.5, -0.1));
  const auto* e = std::get_if<Ellipse>(&neg);
  REQUIRE(e != nullptr);
  CHECK(std::fabs(e->ax_minor_m - 1.7) < 1e-12);
}

TEST_CASE("slow or stationary pedestrians fall back to the fixed circle") {
  const EnuPoint c{1.0, 2.0, 0.0};
  const auto slow = pedestrian_region(c, motion(0.049, 0.3));
  const auto* circ = std::get_if<Circle>(&slow);
  REQUIRE(circ != nullptr);
  CHECK(std::fabs(circ->diameter_m - 1.5) < 1e-12);

  const auto still = pedestrian_region(c, motion(2.0, 0.0, 0.0, true));
  CHECK(std::get_if<Circle>(&still) != nullptr);

  // Exactly at the gate the ellipse applies (>= semantics).
  const auto at_gate = pedestrian_region(c, motion(0.05, 0.0));
  CHECK(std::get_if<Ellipse>(&at_gate) != nullptr);
}

TEST_CASE("cyclist rectangle: fixed length, yaw-rate driven width") {
  const EnuPoint c{0.0, 0.0, 0.0};
  const struct {
    double rate, expect_width;
  } rows[] = {{0.0, 1.2}, {0.1, 1.7}, {0.2, 2.2}, {1.0, 2.2}};
  for (const auto& r : rows) {
    const auto region = cyclist_region(c, motion(4.0, r.rate));
    const auto* rect = std::get_if<Rectangle>(&region);
    REQUIRE(rect != nullptr);
    CHECK(std::fabs(rect->length_m - 2.5) < 1e-12);
    CHECK(std::fabs(rect->width_m - r.expect_width) < 1e-12);
  }
  // No stationary special case for cyclists.
  const auto still = cyclist_region(c, motion(0.0, 0.0, 0.0, true));
  CHECK(std::get_if<Rectangle>(&still) != nullptr);
}

TEST_CASE("containment is boundary inclusive") {
  Ellipse e;
  e.center = {2.0, -1.0, 0.0};
  e.ax_major_m = 2.0;
  e.ax_minor_m = 1.0;
  e.yaw_rad = 0.0;
  CHECK(contains(e, {3.0, -1.0, 0.0}));   // on the major vertex
  CHECK(contains(e, {2.0, -0.5, 0.0}));   // on the minor vertex
  CHECK(contains(e, {2.0, -1.0, 0.0}));   // center
  CHECK_FALSE(contains(e, {3.0001, -1.0, 0.0}));

  Rectangle r;
  r.center = {0.0, 0.0, 0.0};
  r.length_m = 2.0;
  r.width_m = 1.0;
  CHECK(contains(SelectionRegion(r), {1.0, 0.5, 0.0}));  // corner
  CHECK_FALSE(contains(SelectionRegion(r), {1.0, 0.50001, 0.0}));

  Circle c;
  c.center = {0.0, 0.0, 0.0};
  c.diameter_m = 1.5;
  CHECK(contains(SelectionRegion(c), {0.75, 0.0, 0.0}));
  CHECK_FALSE(contains(SelectionRegion(c), {0.7501, 0.0, 0.0}));
}

TEST_CASE("containment is rotation covariant") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::uniform_real_distribution<double> da(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 2000; ++i) {
    Ellipse e;
    e.ax_major_m = 2.5;
    e.ax_minor_m = 1.2;
    e.yaw_rad = 0.0;
    const EnuPoint p{d(rng), d(rng), 0.0};
    const bool base = contains(SelectionRegion(e), p);
    const double a = da(rng);
    Ellipse er = e;
    er.yaw_rad = a;
    const EnuPoint pr{p.east_m * std::cos(a) - p.north_m * std::sin(a),
                      p.east_m * std::sin(a) + p.north_m * std::cos(a), 0.0};
    // Skip razor-thin boundary cases where rotation round-off can flip.
    const double q = std::pow(2.0 * p.east_m / e.ax_major_m, 2) +
                     std::pow(2.0 * p.north_m / e.ax_minor_m, 2);
    if (std::fabs(q - 1.0) < 1e-9) continue;
    CHECK(contains(SelectionRegion(er), pr) == base);
  }
}

TEST_CASE("membership agrees with the polygonal oracle") {
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> spd(0.0, 4.0);
  std::uniform_real_distribution<double> rate(-1.5, 1.5);
  std::uniform_real_distribution<double> yaw(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::bernoulli_distribution kind_pick(0.5);

  int checked = 0, agreed = 0;
  for (int i = 0; i < 2000; ++i) {
    const VruKind kind = kind_pick(rng) ? VruKind::Pedestrian : VruKind::Cyclist;
    const auto m = motion(spd(rng), rate(rng), yaw(rng));
    const EnuPoint center{coord(rng), coord(rng), 0.0};
    const auto region = region_for(kind, center, m);

    oracles::Polygon poly;
    if (const auto* e = std::get_if<Ellipse>(&region)) {
      poly = oracles::approx_ellipse(e->center.east_m, e->center.north_m,
                                     e->ax_major_m, e->ax_minor_m, e->yaw_rad);
    } else if (const auto* c = std::get_if<Circle>(&region)) {
      poly = oracles::approx_ellipse(c->center.east_m, c->center.north_m,
                                     c->diameter_m, c->diameter_m, 0.0);
    } else {
      const auto& r = std::get<Rectangle>(region);
      poly = oracles::approx_rect(r.center.east_m, r.center.north_m, r.length_m,
                                  r.width_m, r.yaw_rad);
    }
    for (int q = 0; q < 5; ++q) {
      const EnuPoint p{coord(rng), coord(rng), 0.0};
      if (oracles::dist_to_polygon(poly, p.east_m, p.north_m) < 1e-6) continue;
      ++checked;
      if (contains(region, p) ==
          oracles::point_in_polygon(poly, p.east_m, p.north_m)) {
        ++agreed;
      }
    }
  }
  REQUIRE(checked > 5000);
  CHECK(static_cast<double>(agreed) / checked >= 0.999);
}

TEST_CASE("region_center") {
  const EnuPoint c{3.0, 4.0, 0.0};
  for (const auto& region :
       {region_for(VruKind::Pedestrian, c, motion(1.0, 0.0)),
        region_for(VruKind::Pedestrian, c, motion(0.0, 0.0)),
        region_for(VruKind::Cyclist, c, motion(3.0, 0.2))}) {
    const auto got = region_center(region);
    CHECK(got.east_m == 3.0);
    CHECK(got.north_m == 4.0);
  }
}
