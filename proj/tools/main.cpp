#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vrulabel/analysis.hpp"
#include "vrulabel/config.hpp"
#include "vrulabel/geomath.hpp"
#include "vrulabel/io.hpp"
#include "vrulabel/pipeline.hpp"
#include "vrulabel/simulator.hpp"
#include "vrulabel/types.hpp"

namespace {

namespace fs = std::filesystem;
using vrulabel::config::KeyValueConfig;
using nlohmann::json;

constexpr double kDeg2Rad = M_PI / 180.0;

const std::vector<std::string> kSimulateKeys = {
    "simulator.kind",
    "simulator.vru_id",
    "simulator.speed_mps",
    "simulator.course_half_length_m",
    "simulator.duration_s",
    "simulator.gnss_rate_hz",
    "simulator.gnss_sigma_m",
    "simulator.radar_rate_hz",
    "simulator.range_res_m",
    "simulator.azimuth_res_deg",
    "simulator.doppler_res_mps",
    "simulator.detections_per_cycle",
    "simulator.clutter_rate",
    "simulator.seed",
    "simulator.origin_lat_deg",
    "simulator.origin_lon_deg",
    "simulator.origin_alt_m",
    "simulator.ego_east_m",
    "simulator.ego_north_m",
    "simulator.ego_yaw_rad",
    "simulator.ego_speed_mps",
    "simulator.sensor_fov_deg",
    "simulator.sensor_max_range_m",
    "simulator.amplitude_ref_db",
    "simulator.amplitude_sigma_db",
    "simulator.ped_footprint_diameter_m",
    "simulator.cyc_footprint_length_m",
    "simulator.cyc_footprint_width_m",
    "simulator.imu_drift_rate",
};

const std::vector<std::string> kLabelKeys = {
    "paths.vru_gnss",
    "paths.ego_gnss",
    "paths.radar",
    "paths.truth",
    "vru.id",
    "vru.kind",
    "ego.lat_deg",
    "ego.lon_deg",
    "ego.alt_m",
    "ego.yaw_rad",
    "clock.ego_offset_s",
    "clock.vru_offset_s",
    "clock.radar_offset_s",
    "pipeline.smoothing_window",
    "pipeline.stationary_threshold_s",
    "pipeline.regression_max_dist_m",
    "pipeline.speed_gate_mps",
    "pipeline.edge_tolerance_s",
    "analysis.alpha",
    "analysis.ref_range_m",
    "analysis.welch",
};

vrulabel::simulator::ScenarioConfig scenario_from_config(const KeyValueConfig& cfg) {
  using vrulabel::simulator::default_scenario;
  const auto kind =
      vrulabel::vru_kind_from_string(cfg.get_string("simulator.kind", "pedestrian"));
  auto sc = default_scenario(kind);
  sc.vru_id = cfg.get_string("simulator.vru_id", sc.vru_id);
  sc.speed_mps = cfg.get_double("simulator.speed_mps", sc.speed_mps);
  sc.course_half_length_m =
      cfg.get_double("simulator.course_half_length_m", sc.course_half_length_m);
  sc.duration_s = cfg.get_double("simulator.duration_s", sc.duration_s);
  sc.gnss_rate_hz = cfg.get_double("simulator.gnss_rate_hz", sc.gnss_rate_hz);
  sc.gnss_sigma_m = cfg.get_double("simulator.gnss_sigma_m", sc.gnss_sigma_m);
  sc.radar_rate_hz = cfg.get_double("simulator.radar_rate_hz", sc.radar_rate_hz);
  sc.range_res_m = cfg.get_double("simulator.range_res_m", sc.range_res_m);
  sc.azimuth_res_rad =
      cfg.get_double("simulator.azimuth_res_deg", sc.azimuth_res_rad / kDeg2Rad) *
      kDeg2Rad;
  sc.doppler_res_mps = cfg.get_double("simulator.doppler_res_mps", sc.doppler_res_mps);
  sc.detections_per_cycle =
      cfg.get_double("simulator.detections_per_cycle", sc.detections_per_cycle);
  sc.clutter_rate = cfg.get_double("simulator.clutter_rate", sc.clutter_rate);
  sc.seed = static_cast<std::uint64_t>(cfg.get_int("simulator.seed", 1));
  sc.origin.lat_deg = cfg.get_double("simulator.origin_lat_deg", sc.origin.lat_deg);
  sc.origin.lon_deg = cfg.get_double("simulator.origin_lon_deg", sc.origin.lon_deg);
  sc.origin.alt_m = cfg.get_double("simulator.origin_alt_m", sc.origin.alt_m);
  sc.ego_position.east_m = cfg.get_double("simulator.ego_east_m", sc.ego_position.east_m);
  sc.ego_position.north_m =
      cfg.get_double("simulator.ego_north_m", sc.ego_position.north_m);
  sc.ego_yaw_rad = cfg.get_double("simulator.ego_yaw_rad", sc.ego_yaw_rad);
  sc.ego_speed_mps = cfg.get_double("simulator.ego_speed_mps", sc.ego_speed_mps);
  sc.sensor_fov_rad =
      cfg.get_double("simulator.sensor_fov_deg", sc.sensor_fov_rad / kDeg2Rad) *
      kDeg2Rad;
  sc.sensor_max_range_m =
      cfg.get_double("simulator.sensor_max_range_m", sc.sensor_max_range_m);
  sc.amplitude_ref_db = cfg.get_double("simulator.amplitude_ref_db", sc.amplitude_ref_db);
  sc.amplitude_sigma_db =
      cfg.get_double("simulator.amplitude_sigma_db", sc.amplitude_sigma_db);
  sc.ped_footprint_diameter_m =
      cfg.get_double("simulator.ped_footprint_diameter_m", sc.ped_footprint_diameter_m);
  sc.cyc_footprint_length_m =
      cfg.get_double("simulator.cyc_footprint_length_m", sc.cyc_footprint_length_m);
  sc.cyc_footprint_width_m =
      cfg.get_double("simulator.cyc_footprint_width_m", sc.cyc_footprint_width_m);
  return sc;
}

std::map<std::string, vrulabel::SensorMount> mounts_from_config(
    const KeyValueConfig& cfg) {
  std::map<std::string, vrulabel::SensorMount> mounts;
  for (const auto& id : cfg.subsections("sensor.")) {
    vrulabel::SensorMount m;
    m.x_m = cfg.get_double("sensor." + id + ".x_m", 0.0);
    m.y_m = cfg.get_double("sensor." + id + ".y_m", 0.0);
    m.yaw_rad = cfg.get_double("sensor." + id + ".yaw_rad", 0.0);
    mounts[id] = m;
  }
  if (mounts.empty()) mounts = vrulabel::simulator::default_mounts();
  return mounts;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  KeyValueConfig cfg = config_path.empty() ? KeyValueConfig()
                                           : KeyValueConfig::parse_file(config_path);
  cfg.validate_keys(kSimulateKeys, {"sensor."});
  const auto sc = scenario_from_config(cfg);
  const auto mounts = mounts_from_config(cfg);

  const auto truth = vrulabel::simulator::gen_truth(sc);
  const auto gnss =
      vrulabel::simulator::gen_gnss(truth, sc.gnss_sigma_m, sc.gnss_rate_hz, sc.seed);
  const auto radar = vrulabel::simulator::gen_radar(truth, mounts, sc.seed);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  vrulabel::io::write_gnss_csv((dir / "gnss.csv").string(), gnss);
  vrulabel::io::write_radar_frames((dir / "frames.jsonl").string(), radar.frames);
  vrulabel::io::write_labels((dir / "truth.jsonl").string(), radar.truth_labels);

  // Manifest doubles as a ready-to-use `label` config.
  KeyValueConfig manifest;
  manifest.set("paths.vru_gnss", "gnss.csv");
  manifest.set("paths.radar", "frames.jsonl");
  manifest.set("paths.truth", "truth.jsonl");
  manifest.set("vru.id", sc.vru_id);
  manifest.set("vru.kind", vrulabel::to_string(sc.kind));
  manifest.set_int("simulator.seed", static_cast<long long>(sc.seed));
  manifest.set("simulator.kind", vrulabel::to_string(sc.kind));
  manifest.set_double("simulator.speed_mps", sc.speed_mps);
  manifest.set_double("simulator.duration_s", sc.duration_s);
  manifest.set_double("simulator.gnss_sigma_m", sc.gnss_sigma_m);
  manifest.set_double("simulator.course_half_length_m", sc.course_half_length_m);
  manifest.set_double("ego.yaw_rad", sc.ego_yaw_rad);
  for (const auto& [id, m] : mounts) {
    manifest.set_double("sensor." + id + ".x_m", m.x_m);
    manifest.set_double("sensor." + id + ".y_m", m.y_m);
    manifest.set_double("sensor." + id + ".yaw_rad", m.yaw_rad);
  }
  if (sc.ego_speed_mps > 0.0) {
    vrulabel::io::write_gnss_csv(
        (dir / "ego.csv").string(),
        vrulabel::simulator::gen_ego_gnss(truth, sc.gnss_rate_hz));
    manifest.set("paths.ego_gnss", "ego.csv");
  } else {
    const auto ego_fix =
        vrulabel::geomath::enu_to_geodetic(sc.ego_position, sc.origin, 0.0);
    manifest.set_double("ego.lat_deg", ego_fix.lat_deg);
    manifest.set_double("ego.lon_deg", ego_fix.lon_deg);
    manifest.set_double("ego.alt_m", ego_fix.alt_m);
  }
  const double drift = cfg.get_double("simulator.imu_drift_rate", 0.0);
  if (drift > 0.0) {
    vrulabel::io::write_gnss_csv(
        (dir / "gnss_imu.csv").string(),
        vrulabel::simulator::gen_imu_drift_track(truth, sc.gnss_sigma_m,
                                                 sc.gnss_rate_hz, drift, sc.seed));
  }
  vrulabel::io::write_file_atomic((dir / "manifest.txt").string(),
                                  manifest.serialize());
  return 0;
}

int cmd_label(const std::string& config_path, const std::string& out_path) {
  KeyValueConfig cfg = KeyValueConfig::parse_file(config_path);
  cfg.validate_keys(kLabelKeys, {"sensor.", "simulator."});
  const fs::path base = fs::path(config_path).parent_path();
  const auto resolve = [&](const std::string& p) {
    return fs::path(p).is_absolute() ? p : (base / p).string();
  };

  vrulabel::VruTrack track;
  track.id = cfg.get_string("vru.id", "vru0");
  track.kind = vrulabel::vru_kind_from_string(cfg.get_string("vru.kind", "pedestrian"));
  track.fixes = vrulabel::io::read_gnss_csv(resolve(cfg.get_string("paths.vru_gnss")));

  const auto frames =
      vrulabel::io::read_radar_frames(resolve(cfg.get_string("paths.radar")));

  vrulabel::pipeline::EgoInput ego;
  if (cfg.has("ego.yaw_rad")) ego.fixed_yaw_rad = cfg.get_double("ego.yaw_rad");
  if (cfg.has("paths.ego_gnss")) {
    ego.fixes = vrulabel::io::read_gnss_csv(resolve(cfg.get_string("paths.ego_gnss")));
  } else {
    vrulabel::GeoFix fix;
    fix.time_s = 0.0;
    fix.lat_deg = cfg.get_double("ego.lat_deg");
    fix.lon_deg = cfg.get_double("ego.lon_deg");
    fix.alt_m = cfg.get_double("ego.alt_m", 0.0);
    ego.fixes.push_back(fix);
  }

  vrulabel::pipeline::PipelineParams params;
  params.smoothing_window =
      static_cast<int>(cfg.get_int("pipeline.smoothing_window", 9));
  params.motion.stationary_threshold_s =
      cfg.get_double("pipeline.stationary_threshold_s", 2.0);
  params.motion.regression_max_dist_m =
      cfg.get_double("pipeline.regression_max_dist_m", 0.25);
  params.speed_gate_mps = cfg.get_double("pipeline.speed_gate_mps", 0.05);
  params.edge_tolerance_s = cfg.get_double("pipeline.edge_tolerance_s", 0.05);

  vrulabel::pipeline::ClockOffsets offsets;
  offsets.ego_s = cfg.get_double("clock.ego_offset_s", 0.0);
  offsets.vru_s = cfg.get_double("clock.vru_offset_s", 0.0);
  offsets.radar_s = cfg.get_double("clock.radar_offset_s", 0.0);

  const auto mounts = mounts_from_config(cfg);
  const auto result =
      vrulabel::pipeline::run(params, offsets, ego, {track}, frames, mounts);
  vrulabel::io::write_labels(out_path, result.labels);

  json report;
  report["processed"] = result.report.frames_processed;
  report["skipped"] = result.report.frames_skipped;
  report["ambiguous"] = result.report.ambiguous_detections;
  report["detections"] = result.report.detections_total;
  std::cout << report.dump() << "\n";
  return 0;
}

int cmd_evaluate(const std::vector<std::string>& auto_paths,
                 const std::vector<std::string>& truth_paths) {
  if (auto_paths.size() != truth_paths.size()) {
    throw vrulabel::AlignmentError("evaluate: --auto/--truth counts differ");
  }
  std::vector<vrulabel::analysis::EvalCounts> per_scene;
  json scenes = json::array();
  for (size_t i = 0; i < auto_paths.size(); ++i) {
    const auto a = vrulabel::io::read_labels(auto_paths[i]);
    const auto t = vrulabel::io::read_labels(truth_paths[i]);
    const auto c = vrulabel::analysis::precision_recall(a, t);
    per_scene.push_back(c);
    json s;
    s["auto"] = auto_paths[i];
    s["tp"] = c.tp;
    s["fp"] = c.fp;
    s["fn"] = c.fn;
    s["precision"] = c.precision ? json(*c.precision) : json(nullptr);
    s["recall"] = c.recall ? json(*c.recall) : json(nullptr);
    scenes.push_back(std::move(s));
  }
  const auto macro = vrulabel::analysis::macro_average(per_scene);
  json out;
  out["scenes"] = std::move(scenes);
  out["macro_precision"] = macro.precision ? json(*macro.precision) : json(nullptr);
  out["macro_recall"] = macro.recall ? json(*macro.recall) : json(nullptr);
  std::cout << out.dump() << "\n";
  return 0;
}

std::vector<vrulabel::io::FeatureRow> feature_rows_from_labels(
    const std::vector<vrulabel::LabeledDetection>& labels, double ref_range_m) {
  std::vector<vrulabel::io::FeatureRow> rows;
  size_t i = 0;
  while (i < labels.size()) {
    const double t = labels[i].detection.time_s;
    const std::string& sid = labels[i].detection.sensor_id;
    std::vector<vrulabel::analysis::CycleDetection> cycle;
    while (i < labels.size() && labels[i].detection.time_s == t &&
           labels[i].detection.sensor_id == sid) {
      const auto& lab = labels[i];
      if (!vrulabel::is_background(lab)) {
        cycle.push_back({lab.pos_vehicle.east_m, lab.pos_vehicle.north_m,
                         lab.detection.range_m, lab.detection.amplitude_db,
                         lab.comp_doppler_mps});
      }
      ++i;
    }
    if (const auto f = vrulabel::analysis::feature_vector(cycle, ref_range_m)) {
      rows.push_back({t, sid, static_cast<int>(cycle.size()), *f});
    }
  }
  return rows;
}

int cmd_features(const std::string& labels_path, double ref_range_m,
                 const std::string& out_path) {
  const auto labels = vrulabel::io::read_labels(labels_path);
  const auto rows = feature_rows_from_labels(labels, ref_range_m);
  const std::string table = vrulabel::io::serialize_feature_table(rows);
  if (out_path.empty()) {
    std::cout << table;
  } else {
    vrulabel::io::write_file_atomic(out_path, table);
  }
  return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, double alpha,
                bool welch) {
  const auto a_rows = vrulabel::io::read_feature_table(a_path);
  const auto b_rows = vrulabel::io::read_feature_table(b_path);

  const std::vector<std::pair<std::string,
                              double vrulabel::analysis::FeatureVector::*>>
      columns = {
          {"mean_power_db", &vrulabel::analysis::FeatureVector::mean_power_db},
          {"doppler_std_mps", &vrulabel::analysis::FeatureVector::doppler_std_mps},
          {"conf_major_m", &vrulabel::analysis::FeatureVector::conf_major_m},
          {"conf_minor_m", &vrulabel::analysis::FeatureVector::conf_minor_m},
          {"weighted_count", &vrulabel::analysis::FeatureVector::weighted_count},
      };

  const auto stats = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair<double, double>(m, v.size() > 1 ? std::sqrt(s / (v.size() - 1))
                                                     : 0.0);
  };

  std::printf(
      "feature,n_a,n_b,mean_a_norm,std_a_norm,mean_b_norm,std_b_norm,t_stat,dof,"
      "p_two_sided,significant\n");
  for (const auto& [name, member] : columns) {
    std::vector<double> va, vb;
    va.reserve(a_rows.size());
    vb.reserve(b_rows.size());
    for (const auto& r : a_rows) va.push_back(r.features.*member);
    for (const auto& r : b_rows) vb.push_back(r.features.*member);
    const auto tt = vrulabel::analysis::t_test_unpaired(va, vb, alpha, welch);
    // Baseline-normalized view: --b is the reference (without backpack).
    const auto na = vrulabel::analysis::normalize_to_baseline(va, vb);
    const auto nb = vrulabel::analysis::normalize_to_baseline(vb, vb);
    const auto [ma, sa] = stats(na);
    const auto [mb, sb] = stats(nb);
    std::printf("%s,%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                name.c_str(), va.size(), vb.size(), ma, sa, mb, sb, tt.t_stat,
                tt.dof, tt.p_two_sided, tt.significant ? "true" : "false");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automated GNSS-based labeling of VRU radar detections"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scene");
  simulate->add_option("--config", config_path, "Scenario config file");
  simulate->add_option("--out", out_path, "Output directory")->required();

  std::string label_config, label_out;
  auto* label = app.add_subcommand("label", "Auto-label radar frames");
  label->add_option("--config", label_config, "Run config file")->required();
  label->add_option("--out", label_out, "Labeled detections output file")->required();

  std::vector<std::string> auto_paths, truth_paths;
  auto* evaluate = app.add_subcommand("evaluate", "Precision/recall vs reference");
  evaluate->add_option("--auto", auto_paths, "Auto-label file(s)")->required();
  evaluate->add_option("--truth", truth_paths, "Reference label file(s)")->required();

  std::string features_labels, features_out;
  double ref_range = 10.0;
  auto* features = app.add_subcommand("features", "Per-cycle feature statistics");
  features->add_option("--labels", features_labels, "Label file")->required();
  features->add_option("--ref-range", ref_range, "Weighted-count reference range [m]");
  features->add_option("--out", features_out, "Output file (default stdout)");

  std::string cmp_a, cmp_b;
  double alpha = 0.05;
  bool welch = false;
  auto* compare = app.add_subcommand("compare", "T-tests and baseline-normalized stats");
  compare->add_option("--a", cmp_a, "Feature table A")->required();
  compare->add_option("--b", cmp_b, "Feature table B (baseline)")->required();
  compare->add_option("--alpha", alpha, "Significance level");
  compare->add_flag("--welch", welch, "Welch's t-test instead of pooled variance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, out_path);
    if (label->parsed()) return cmd_label(label_config, label_out);
    if (evaluate->parsed()) return cmd_evaluate(auto_paths, truth_paths);
    if (features->parsed()) return cmd_features(features_labels, ref_range, features_out);
    if (compare->parsed()) return cmd_compare(cmp_a, cmp_b, alpha, welch);
  } catch (const vrulabel::AlignmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const vrulabel::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const vrulabel::InvariantError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
