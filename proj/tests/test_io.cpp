#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "vrulabel/io.hpp"

using namespace vrulabel;
using namespace vrulabel::io;

namespace {

std::vector<GeoFix> sample_fixes() {
  return {{0.0, 48.000001, 9.0000007, 500.25},
          {0.05, 48.0000013, 9.0000009, 500.24},
          {0.1, 48.0000016, 9.0000012, 500.26}};
}

std::vector<RadarFrame> sample_frames() {
  RadarFrame f;
  f.time_s = 0.25;
  f.sensor_id = "left";
  RadarDetection d;
  d.time_s = 0.25;
  d.sensor_id = "left";
  d.range_m = 5.1;
  d.azimuth_rad = -0.2;
  d.radial_speed_mps = 1.31;
  d.amplitude_db = 17.25;
  f.detections = {d};
  return {f};
}

std::vector<LabeledDetection> sample_labels() {
  LabeledDetection lab;
  lab.detection = sample_frames()[0].detections[0];
  lab.label = "vru0";
  lab.region_id = "vru0";
  lab.ambiguous = false;
  lab.pos_vehicle = {5.0, -1.0, 0.0};
  lab.comp_doppler_mps = 1.31;
  LabeledDetection bg;
  bg.detection = lab.detection;
  bg.detection.range_m = 11.0;
  return {lab, bg};
}

}  // namespace

TEST_CASE("gnss csv round trip is byte-stable") {
  const auto fixes = sample_fixes();
  const std::string text = serialize_gnss_csv(fixes);
  CHECK(text.substr(0, text.find('\n')) == "time_s,lat_deg,lon_deg,alt_m");
  const auto parsed = parse_gnss_csv(text);
  REQUIRE(parsed.size() == fixes.size());
  for (size_t i = 0; i < fixes.size(); ++i) {
    CHECK(parsed[i].time_s == fixes[i].time_s);
    CHECK(parsed[i].lat_deg == fixes[i].lat_deg);
    CHECK(parsed[i].lon_deg == fixes[i].lon_deg);
    CHECK(parsed[i].alt_m == fixes[i].alt_m);
  }
  CHECK(serialize_gnss_csv(parsed) == text);
}

TEST_CASE("gnss csv rejects malformed input") {
  CHECK_THROWS_AS(parse_gnss_csv(""), FormatError);
  CHECK_THROWS_AS(parse_gnss_csv("time,lat,lon,alt\n"), FormatError);
  const std::string hdr = "time_s,lat_deg,lon_deg,alt_m\n";
  CHECK_THROWS_AS(parse_gnss_csv(hdr + "0,48,9\n"), FormatError);
  CHECK_THROWS_AS(parse_gnss_csv(hdr + "0,48,9,500,1\n"), FormatError);
  CHECK_THROWS_AS(parse_gnss_csv(hdr + "0,48,abc,500\n"), FormatError);
  CHECK_THROWS_AS(parse_gnss_csv(hdr + "0,91,9,500\n"), FormatError);
  CHECK_THROWS_AS(parse_gnss_csv(hdr + "0,48,181,500\n"), FormatError);
}

TEST_CASE("radar frames round trip and validation") {
  const auto frames = sample_frames();
  const std::string text = serialize_radar_frames(frames);
  const auto parsed = parse_radar_frames(text);
  REQUIRE(parsed.size() == 1);
  REQUIRE(parsed[0].detections.size() == 1);
  CHECK(parsed[0].detections[0].range_m == 5.1);
  CHECK(serialize_radar_frames(parsed) == text);

  CHECK_THROWS_AS(parse_radar_frames("not json\n"), FormatError);
  CHECK_THROWS_AS(
      parse_radar_frames("{\"schema\":\"labels\",\"version\":1}\n"),
      FormatError);
  CHECK_THROWS_AS(
      parse_radar_frames("{\"schema\":\"radar_frames\",\"version\":2}\n"),
      FormatError);

  // Unknown fields are rejected by name.
  const std::string with_extra =
      "{\"schema\":\"radar_frames\",\"version\":1}\n"
      "{\"time_s\":0.0,\"sensor_id\":\"left\",\"detections\":[],\"snr\":3}\n";
  try {
    parse_radar_frames(with_extra);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("snr") != std::string::npos);
  }

  // Detection metadata must agree with its frame.
  const std::string mismatched =
      "{\"schema\":\"radar_frames\",\"version\":1}\n"
      "{\"time_s\":0.0,\"sensor_id\":\"left\",\"detections\":[{\"time_s\":0.1,"
      "\"sensor_id\":\"left\",\"range_m\":2.0,\"azimuth_rad\":0.0,"
      "\"radial_speed_mps\":0.0,\"amplitude_db\":0.0}]}\n";
  CHECK_THROWS_AS(parse_radar_frames(mismatched), FormatError);
}

TEST_CASE("labels round trip and invariants") {
  const auto labels = sample_labels();
  const std::string text = serialize_labels(labels);
  const auto parsed = parse_labels(text);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].label == "vru0");
  REQUIRE(parsed[0].region_id.has_value());
  CHECK(parsed[1].label == kBackgroundLabel);
  CHECK_FALSE(parsed[1].region_id.has_value());
  CHECK(serialize_labels(parsed) == text);

  // BACKGROUND with a region id (and vice versa) must be rejected.
  auto broken = labels;
  broken[1].region_id = "vru0";
  CHECK_THROWS_AS(parse_labels(serialize_labels(broken)), FormatError);
  broken = labels;
  broken[0].region_id.reset();
  CHECK_THROWS_AS(parse_labels(serialize_labels(broken)), FormatError);
}

TEST_CASE("feature table round trip") {
  FeatureRow r;
  r.time_s = 1.25;
  r.sensor_id = "right";
  r.count = 7;
  r.features = {12.5, 0.33, 2.1, 0.9, 6.125};
  const std::string text = serialize_feature_table({r});
  const auto parsed = parse_feature_table(text);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].features.weighted_count == 6.125);
  CHECK(serialize_feature_table(parsed) == text);
  CHECK_THROWS_AS(parse_feature_table("bogus\n"), FormatError);
}

TEST_CASE("atomic writes leave no temp file behind") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "vrulabel_io_test";
  fs::create_directories(dir);
  const auto path = (dir / "out.txt").string();
  write_file_atomic(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  CHECK_FALSE(fs::exists(path + ".tmp"));
  write_file_atomic(path, "replaced\n");  // overwrite is atomic too
  CHECK(read_file(path) == "replaced\n");
  fs::remove_all(dir);
  CHECK_THROWS_AS(read_file((dir / "missing.txt").string()), FormatError);
}
