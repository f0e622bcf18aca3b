#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vrulabel/config.hpp"

using namespace vrulabel;
using vrulabel::config::KeyValueConfig;

TEST_CASE("parsing: comments, whitespace, duplicates") {
  const auto cfg = KeyValueConfig::parse_string(
      "# run setup\n"
      "vru.id = vru0   # inline comment\n"
      "\n"
      "pipeline.smoothing_window=9\n"
      "  ego.yaw_rad =  1.5707963267948966  \n");
  CHECK(cfg.get_string("vru.id") == "vru0");
  CHECK(cfg.get_int("pipeline.smoothing_window") == 9);
  CHECK(cfg.get_double("ego.yaw_rad") == doctest::Approx(1.5707963267948966));

  CHECK_THROWS_AS(KeyValueConfig::parse_string("a = 1\na = 2\n"), FormatError);
  CHECK_THROWS_AS(KeyValueConfig::parse_string("just words\n"), FormatError);
  CHECK_THROWS_AS(KeyValueConfig::parse_string("= 3\n"), FormatError);
}

TEST_CASE("typed getters validate and fall back") {
  const auto cfg = KeyValueConfig::parse_string("a = 1.5\nb = x\nc = true\n");
  CHECK(cfg.get_double("a") == 1.5);
  CHECK_THROWS_AS(cfg.get_double("b"), FormatError);
  CHECK_THROWS_AS(cfg.get_int("a"), FormatError);
  CHECK(cfg.get_bool("c"));
  CHECK_THROWS_AS(cfg.get_string("missing"), FormatError);
  CHECK(cfg.get_double("missing", 2.5) == 2.5);
  CHECK(cfg.get_string("missing", "dflt") == "dflt");
}

TEST_CASE("unknown keys are rejected by name") {
  const auto cfg = KeyValueConfig::parse_string(
      "vru.id = a\nsensor.left.x_m = 0.3\ntypo.key = 1\n");
  try {
    cfg.validate_keys({"vru.id"}, {"sensor."});
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("typo.key") != std::string::npos);
  }
}

TEST_CASE("subsections and stable serialization") {
  KeyValueConfig cfg;
  cfg.set("sensor.left.x_m", "0.3");
  cfg.set("sensor.right.x_m", "0.3");
  cfg.set_double("ego.yaw_rad", 0.5);
  cfg.set_int("pipeline.smoothing_window", 9);
  const auto ids = cfg.subsections("sensor.");
  REQUIRE(ids.size() == 2);
  CHECK(ids[0] == "left");
  CHECK(ids[1] == "right");

  const std::string text = cfg.serialize();
  const auto reparsed = KeyValueConfig::parse_string(text);
  CHECK(reparsed.serialize() == text);  // sorted, round-trip stable
  CHECK(reparsed.get_int("pipeline.smoothing_window") == 9);
}
