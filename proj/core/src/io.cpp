#include "vrulabel/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vrulabel::io {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const char* context) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const auto& a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw FormatError(std::string(context) + ": unknown field \"" + key + "\"");
    }
  }
}

json parse_json_line(const std::string& line, const char* context) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(context) + ": bad JSON line: " + e.what());
  }
}

void check_header(const std::string& line, const std::string& schema,
                  const char* context) {
  const json h = parse_json_line(line, context);
  check_keys(h, {"schema", "version"}, context);
  if (h.value("schema", "") != schema) {
    throw FormatError(std::string(context) + ": expected schema \"" + schema +
                      "\", got \"" + h.value("schema", "") + "\"");
  }
  if (h.value("version", 0) != kSchemaVersion) {
    throw FormatError(std::string(context) + ": unsupported schema version");
  }
}

std::string header_line(const std::string& schema) {
  json h;
  h["schema"] = schema;
  h["version"] = kSchemaVersion;
  return h.dump();
}

json detection_to_json(const RadarDetection& d) {
  json j;
  j["time_s"] = d.time_s;
  j["sensor_id"] = d.sensor_id;
  j["range_m"] = d.range_m;
  j["azimuth_rad"] = d.azimuth_rad;
  j["radial_speed_mps"] = d.radial_speed_mps;
  j["amplitude_db"] = d.amplitude_db;
  return j;
}

RadarDetection detection_from_json(const json& j, const char* context) {
  check_keys(j,
             {"time_s", "sensor_id", "range_m", "azimuth_rad",
              "radial_speed_mps", "amplitude_db"},
             context);
  RadarDetection d;
  d.time_s = j.at("time_s").get<double>();
  d.sensor_id = j.at("sensor_id").get<std::string>();
  d.range_m = j.at("range_m").get<double>();
  d.azimuth_rad = j.at("azimuth_rad").get<double>();
  d.radial_speed_mps = j.at("radial_speed_mps").get<double>();
  d.amplitude_db = j.at("amplitude_db").get<double>();
  if (!(d.range_m > 0.0)) {
    throw FormatError(std::string(context) + ": range_m must be > 0");
  }
  return d;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw FormatError("io: cannot open " + tmp + " for writing");
    }
    out << content;
    if (!out.flush()) {
      throw FormatError("io: write failed for " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw FormatError("io: rename to " + path + " failed: " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("io: cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string serialize_gnss_csv(const std::vector<GeoFix>& fixes) {
  std::string out = "time_s,lat_deg,lon_deg,alt_m\n";
  for (const auto& f : fixes) {
    out += fmt(f.time_s) + "," + fmt(f.lat_deg) + "," + fmt(f.lon_deg) + "," +
           fmt(f.alt_m) + "\n";
  }
  return out;
}

std::vector<GeoFix> parse_gnss_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("gnss csv: empty file");
  }
  if (line != "time_s,lat_deg,lon_deg,alt_m") {
    throw FormatError("gnss csv: unexpected header \"" + line + "\"");
  }
  std::vector<GeoFix> fixes;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    GeoFix f;
    double* fields[4] = {&f.time_s, &f.lat_deg, &f.lon_deg, &f.alt_m};
    std::istringstream ls(line);
    std::string cell;
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ls, cell, ',')) {
        throw FormatError("gnss csv: line " + std::to_string(lineno) +
                          " has too few fields");
      }
      try {
        size_t pos = 0;
        *fields[i] = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw FormatError("gnss csv: line " + std::to_string(lineno) +
                          ": bad number \"" + cell + "\"");
      }
    }
    if (std::getline(ls, cell, ',')) {
      throw FormatError("gnss csv: line " + std::to_string(lineno) +
                        " has extra fields");
    }
    if (f.lat_deg < -90.0 || f.lat_deg > 90.0 || f.lon_deg < -180.0 ||
        f.lon_deg > 180.0) {
      throw FormatError("gnss csv: line " + std::to_string(lineno) +
                        ": lat/lon out of range");
    }
    fixes.push_back(f);
  }
  return fixes;
}

void write_gnss_csv(const std::string& path, const std::vector<GeoFix>& fixes) {
  write_file_atomic(path, serialize_gnss_csv(fixes));
}

std::vector<GeoFix> read_gnss_csv(const std::string& path) {
  return parse_gnss_csv(read_file(path));
}

std::string serialize_radar_frames(const std::vector<RadarFrame>& frames) {
  std::string out = header_line("radar_frames") + "\n";
  for (const auto& f : frames) {
    json j;
    j["time_s"] = f.time_s;
    j["sensor_id"] = f.sensor_id;
    json dets = json::array();
    for (const auto& d : f.detections) dets.push_back(detection_to_json(d));
    j["detections"] = std::move(dets);
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<RadarFrame> parse_radar_frames(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("radar frames: empty file");
  }
  check_header(line, "radar_frames", "radar frames");
  std::vector<RadarFrame> frames;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = parse_json_line(line, "radar frames");
    check_keys(j, {"time_s", "sensor_id", "detections"}, "radar frames");
    RadarFrame f;
    f.time_s = j.at("time_s").get<double>();
    f.sensor_id = j.at("sensor_id").get<std::string>();
    for (const auto& dj : j.at("detections")) {
      RadarDetection d = detection_from_json(dj, "radar frames");
      if (d.time_s != f.time_s || d.sensor_id != f.sensor_id) {
        throw FormatError(
            "radar frames: detection time/sensor differs from its frame");
      }
      f.detections.push_back(std::move(d));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_radar_frames(const std::string& path,
                        const std::vector<RadarFrame>& frames) {
  write_file_atomic(path, serialize_radar_frames(frames));
}

std::vector<RadarFrame> read_radar_frames(const std::string& path) {
  return parse_radar_frames(read_file(path));
}

std::string serialize_labels(const std::vector<LabeledDetection>& labels) {
  std::string out = header_line("labels") + "\n";
  for (const auto& lab : labels) {
    json j = detection_to_json(lab.detection);
    j["label"] = lab.label;
    j["region_id"] = lab.region_id ? json(*lab.region_id) : json(nullptr);
    j["ambiguous"] = lab.ambiguous;
    j["x_vehicle_m"] = lab.pos_vehicle.east_m;
    j["y_vehicle_m"] = lab.pos_vehicle.north_m;
    j["comp_doppler_mps"] = lab.comp_doppler_mps;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<LabeledDetection> parse_labels(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("labels: empty file");
  }
  check_header(line, "labels", "labels");
  std::vector<LabeledDetection> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = parse_json_line(line, "labels");
    check_keys(j,
               {"time_s", "sensor_id", "range_m", "azimuth_rad",
                "radial_speed_mps", "amplitude_db", "label", "region_id",
                "ambiguous", "x_vehicle_m", "y_vehicle_m", "comp_doppler_mps"},
               "labels");
    LabeledDetection lab;
    lab.detection = detection_from_json(
        json{{"time_s", j.at("time_s")},
             {"sensor_id", j.at("sensor_id")},
             {"range_m", j.at("range_m")},
             {"azimuth_rad", j.at("azimuth_rad")},
             {"radial_speed_mps", j.at("radial_speed_mps")},
             {"amplitude_db", j.at("amplitude_db")}},
        "labels");
    lab.label = j.at("label").get<std::string>();
    if (!j.at("region_id").is_null()) {
      lab.region_id = j.at("region_id").get<std::string>();
    }
    lab.ambiguous = j.at("ambiguous").get<bool>();
    lab.pos_vehicle.east_m = j.at("x_vehicle_m").get<double>();
    lab.pos_vehicle.north_m = j.at("y_vehicle_m").get<double>();
    lab.comp_doppler_mps = j.at("comp_doppler_mps").get<double>();
    const bool bg = lab.label == kBackgroundLabel;
    if (bg == lab.region_id.has_value()) {
      throw FormatError(
          "labels: label/region_id invariant violated (label must be "
          "BACKGROUND exactly when region_id is null)");
    }
    labels.push_back(std::move(lab));
  }
  return labels;
}

void write_labels(const std::string& path,
                  const std::vector<LabeledDetection>& labels) {
  write_file_atomic(path, serialize_labels(labels));
}

std::vector<LabeledDetection> read_labels(const std::string& path) {
  return parse_labels(read_file(path));
}

std::string serialize_feature_table(const std::vector<FeatureRow>& rows) {
  std::string out =
      "time_s,sensor_id,count,mean_power_db,doppler_std_mps,conf_major_m,"
      "conf_minor_m,weighted_count\n";
  for (const auto& r : rows) {
    out += fmt(r.time_s) + "," + r.sensor_id + "," + std::to_string(r.count) +
           "," + fmt(r.features.mean_power_db) + "," +
           fmt(r.features.doppler_std_mps) + "," + fmt(r.features.conf_major_m) +
           "," + fmt(r.features.conf_minor_m) + "," +
           fmt(r.features.weighted_count) + "\n";
  }
  return out;
}

std::vector<FeatureRow> parse_feature_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("feature table: empty file");
  }
  if (line !=
      "time_s,sensor_id,count,mean_power_db,doppler_std_mps,conf_major_m,"
      "conf_minor_m,weighted_count") {
    throw FormatError("feature table: unexpected header \"" + line + "\"");
  }
  std::vector<FeatureRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw FormatError("feature table: line " + std::to_string(lineno) +
                        " has " + std::to_string(cells.size()) +
                        " fields, expected 8");
    }
    FeatureRow r;
    try {
      r.time_s = std::stod(cells[0]);
      r.sensor_id = cells[1];
      r.count = std::stoi(cells[2]);
      r.features.mean_power_db = std::stod(cells[3]);
      r.features.doppler_std_mps = std::stod(cells[4]);
      r.features.conf_major_m = std::stod(cells[5]);
      r.features.conf_minor_m = std::stod(cells[6]);
      r.features.weighted_count = std::stod(cells[7]);
    } catch (const std::exception&) {
      throw FormatError("feature table: line " + std::to_string(lineno) +
                        ": bad number");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_feature_table(const std::string& path,
                         const std::vector<FeatureRow>& rows) {
  write_file_atomic(path, serialize_feature_table(rows));
}

std::vector<FeatureRow> read_feature_table(const std::string& path) {
  return parse_feature_table(read_file(path));
}

}  // namespace vrulabel::io
