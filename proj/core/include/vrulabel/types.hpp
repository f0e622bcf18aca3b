#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vrulabel {

// Error categories map to process exit codes in tools/:
//   FormatError -> 2, AlignmentError -> 3, InvariantError -> 4.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AlignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raw geodetic sample on the scene clock.
struct GeoFix {
  double time_s = 0.0;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

/// Local tangent-plane point. The labeling pipeline is 2-D; up_m is carried
/// but ignored by the planar stages.
struct EnuPoint {
  double east_m = 0.0;
  double north_m = 0.0;
  double up_m = 0.0;
};

/// Ego vehicle pose in the scene ENU frame. Yaw is counterclockwise from the
/// east axis; vehicle frame is x forward, y left.
struct EgoPose {
  double time_s = 0.0;
  EnuPoint position;
  double yaw_rad = 0.0;
  double speed_mps = 0.0;
};

/// Sensor extrinsics in the vehicle frame (x forward, y left); yaw_rad is the
/// boresight offset, counterclockwise.
struct SensorMount {
  double x_m = 0.0;
  double y_m = 0.0;
  double yaw_rad = 0.0;
};

enum class VruKind { Pedestrian, Cyclist };

std::string to_string(VruKind kind);
VruKind vru_kind_from_string(const std::string& s);

struct VruTrack {
  std::string id;
  VruKind kind = VruKind::Pedestrian;
  std::vector<GeoFix> fixes;  // strictly increasing time_s, >= 2 entries
};

/// Per-timestamp motion state of a VRU.
struct MotionEstimate {
  double speed_mps = 0.0;
  double yaw_rad = 0.0;
  double yaw_rate_rps = 0.0;
  bool stationary = false;
};

/// One radar reflection point, post-CFAR. radial_speed_mps is positive when
/// the target recedes from the sensor.
struct RadarDetection {
  double time_s = 0.0;
  std::string sensor_id;
  double range_m = 0.0;
  double azimuth_rad = 0.0;
  double radial_speed_mps = 0.0;
  double amplitude_db = 0.0;  // uncalibrated
};

struct RadarFrame {
  double time_s = 0.0;
  std::string sensor_id;
  std::vector<RadarDetection> detections;
};

inline constexpr const char* kBackgroundLabel = "BACKGROUND";

struct LabeledDetection {
  RadarDetection detection;
  std::string label = kBackgroundLabel;   // track id or BACKGROUND
  std::optional<std::string> region_id;   // present iff label != BACKGROUND
  bool ambiguous = false;                 // matched more than one region
  EnuPoint pos_vehicle;                   // vehicle-frame Cartesian position
  double comp_doppler_mps = 0.0;          // ego-motion compensated radial speed
};

inline bool is_background(const LabeledDetection& d) {
  return d.label == kBackgroundLabel;
}

}  // namespace vrulabel
