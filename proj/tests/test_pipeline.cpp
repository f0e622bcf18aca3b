#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vrulabel/analysis.hpp"
#include "vrulabel/geomath.hpp"
#include "vrulabel/pipeline.hpp"
#include "vrulabel/simulator.hpp"

using namespace vrulabel;
using namespace vrulabel::pipeline;

namespace {

constexpr double kPi = std::numbers::pi;

RadarDetection make_det(double x, double y, double t = 0.0,
                        const std::string& sensor = "s") {
  // Inverse of detection_to_vehicle for an identity mount.
  RadarDetection d;
  d.time_s = t;
  d.sensor_id = sensor;
  d.range_m = std::hypot(x, y);
  d.azimuth_rad = std::atan2(y, x);
  return d;
}

struct SimScene {
  simulator::ScenarioConfig cfg;
  std::vector<GeoFix> vru_fixes;
  simulator::SimRadar radar;
  GeoFix ego_fix;
};

SimScene make_scene(VruKind kind, double duration_s, double sigma,
                    double clutter, std::uint64_t seed) {
  SimScene s;
  s.cfg = simulator::default_scenario(kind);
  s.cfg.duration_s = duration_s;
  s.cfg.gnss_sigma_m = sigma;
  s.cfg.clutter_rate = clutter;
  s.cfg.seed = seed;
  const auto truth = simulator::gen_truth(s.cfg);
  s.vru_fixes = simulator::gen_gnss(truth, sigma, s.cfg.gnss_rate_hz, seed);
  s.radar = simulator::gen_radar(truth, simulator::default_mounts(), seed);
  s.ego_fix = geomath::enu_to_geodetic(s.cfg.ego_position, s.cfg.origin, 0.0);
  return s;
}

RunResult run_scene(const SimScene& s, ClockOffsets offsets = {},
                    std::vector<RadarFrame> frames = {}) {
  if (frames.empty()) frames = s.radar.frames;
  EgoInput ego;
  ego.fixes = {s.ego_fix};
  ego.fixed_yaw_rad = s.cfg.ego_yaw_rad;
  VruTrack track;
  track.id = s.cfg.vru_id;
  track.kind = s.cfg.kind;
  track.fixes = s.vru_fixes;
  return run(PipelineParams{}, offsets, ego, {track}, frames,
             simulator::default_mounts());
}

}  // namespace

TEST_CASE("label_frame: membership, tie-break, conservation") {
  EgoPose ego;  // identity pose, so vehicle frame == ENU frame
  SensorMount mount;
  RadarFrame frame;
  frame.sensor_id = "s";
  frame.detections = {make_det(5.0, 0.0), make_det(5.9, 0.0), make_det(9.0, 4.0),
                      make_det(5.45, 0.2)};

  regions::Circle a;
  a.center = {5.0, 0.0, 0.0};
  a.diameter_m = 1.5;
  regions::Circle b;
  b.center = {6.0, 0.0, 0.0};
  b.diameter_m = 1.5;
  const std::vector<std::pair<std::string, regions::SelectionRegion>> gates = {
      {"p1", a}, {"p2", b}};

  const auto labs = label_frame(frame, ego, gates, mount);
  REQUIRE(labs.size() == frame.detections.size());
  CHECK(labs[0].label == "p1");
  CHECK_FALSE(labs[0].ambiguous);
  CHECK(labs[1].label == "p2");
  CHECK(labs[2].label == kBackgroundLabel);
  CHECK_FALSE(labs[2].region_id.has_value());
  // Inside both circles, nearer to p1's center, flagged ambiguous.
  CHECK(labs[3].label == "p1");
  CHECK(labs[3].ambiguous);
}

TEST_CASE("noiseless end-to-end run matches the simulator truth exactly") {
  const auto s = make_scene(VruKind::Pedestrian, 15.0, 0.0, 0.0, 21);
  const auto result = run_scene(s);
  REQUIRE(result.labels.size() == s.radar.truth_labels.size());
  const auto counts =
      analysis::precision_recall(result.labels, s.radar.truth_labels);
  CHECK(counts.fp == 0);
  CHECK(counts.fn == 0);
  CHECK(counts.tp > 0);
  CHECK(result.report.frames_skipped == 0);
}

TEST_CASE("clock offsets realign shifted streams") {
  const auto s = make_scene(VruKind::Cyclist, 10.0, 0.0, 0.0, 8);
  const auto base = run_scene(s);

  auto shifted = s.radar.frames;
  for (auto& f : shifted) {
    f.time_s += 5.0;
    for (auto& d : f.detections) d.time_s += 5.0;
  }
  ClockOffsets offsets;
  offsets.radar_s = -5.0;
  const auto realigned = run_scene(s, offsets, shifted);
  REQUIRE(realigned.labels.size() == base.labels.size());
  long long diff = 0;
  for (size_t i = 0; i < base.labels.size(); ++i) {
    if (base.labels[i].label != realigned.labels[i].label) ++diff;
  }
  CHECK(diff == 0);
}

TEST_CASE("disjoint stream spans raise AlignmentError") {
  auto s = make_scene(VruKind::Pedestrian, 5.0, 0.0, 0.0, 2);
  for (auto& f : s.vru_fixes) f.time_s += 1000.0;
  CHECK_THROWS_AS(run_scene(s), AlignmentError);
}

TEST_CASE("frames outside coverage are skipped but conserved as background") {
  const auto s = make_scene(VruKind::Pedestrian, 5.0, 0.0, 0.0, 12);
  auto frames = s.radar.frames;
  RadarFrame straggler;
  straggler.time_s = 6.0;  // a second past the VRU track end
  straggler.sensor_id = "left";
  straggler.detections = {make_det(3.0, 0.0, 6.0, "left")};
  frames.push_back(straggler);

  const auto result = run_scene(s, {}, frames);
  CHECK(result.report.frames_skipped == 1);
  size_t total_in = 0;
  for (const auto& f : frames) total_in += f.detections.size();
  CHECK(result.labels.size() == total_in);  // nothing dropped
  CHECK(result.labels.back().label == kBackgroundLabel);
  CHECK(result.labels.back().detection.time_s == 6.0);
}

TEST_CASE("missing sensor mount is a format error") {
  const auto s = make_scene(VruKind::Pedestrian, 3.0, 0.0, 0.0, 4);
  EgoInput ego;
  ego.fixes = {s.ego_fix};
  ego.fixed_yaw_rad = s.cfg.ego_yaw_rad;
  VruTrack track;
  track.id = s.cfg.vru_id;
  track.kind = s.cfg.kind;
  track.fixes = s.vru_fixes;
  CHECK_THROWS_AS(
      run(PipelineParams{}, {}, ego, {track}, s.radar.frames, {}),
      FormatError);
}

TEST_CASE("region yaw follows the ego heading") {
  // A cyclist crossing left-to-right in front of a north-facing ego: the
  // rectangle in the vehicle frame must be rotated by vru_yaw - ego_yaw.
  EgoPose ego;
  ego.yaw_rad = kPi / 2.0;
  const MotionEstimate m{3.0, 0.0, 0.0, false};  // travelling east in ENU
  const double region_yaw = geomath::wrap_angle(m.yaw_rad - ego.yaw_rad);
  CHECK(region_yaw == doctest::Approx(-kPi / 2.0));
}
