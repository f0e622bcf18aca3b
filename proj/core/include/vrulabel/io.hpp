#pragma once

#include <string>
#include <vector>

#include "vrulabel/analysis.hpp"
#include "vrulabel/types.hpp"

namespace vrulabel::io {

/// Writes content to path via a temp file and rename, so readers never see a
/// partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// GNSS tracks: CSV, header `time_s,lat_deg,lon_deg,alt_m`, decimal point,
// LF line endings, 17 significant digits.
std::string serialize_gnss_csv(const std::vector<GeoFix>& fixes);
std::vector<GeoFix> parse_gnss_csv(const std::string& text);
void write_gnss_csv(const std::string& path, const std::vector<GeoFix>& fixes);
std::vector<GeoFix> read_gnss_csv(const std::string& path);

// Radar frames and labels: JSON lines with a schema header line; unknown
// fields are rejected by name.
std::string serialize_radar_frames(const std::vector<RadarFrame>& frames);
std::vector<RadarFrame> parse_radar_frames(const std::string& text);
void write_radar_frames(const std::string& path, const std::vector<RadarFrame>& frames);
std::vector<RadarFrame> read_radar_frames(const std::string& path);

std::string serialize_labels(const std::vector<LabeledDetection>& labels);
std::vector<LabeledDetection> parse_labels(const std::string& text);
void write_labels(const std::string& path, const std::vector<LabeledDetection>& labels);
std::vector<LabeledDetection> read_labels(const std::string& path);

// Per-cycle feature table: CSV.
struct FeatureRow {
  double time_s = 0.0;
  std::string sensor_id;
  int count = 0;
  analysis::FeatureVector features;
};

std::string serialize_feature_table(const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> parse_feature_table(const std::string& text);
void write_feature_table(const std::string& path, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_feature_table(const std::string& path);

}  // namespace vrulabel::io
