#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <map>
#include <string>
#include <vector>

#include "vrulabel/types.hpp"

namespace vrulabel::simulator {

struct ScenarioConfig {
  VruKind kind = VruKind::Pedestrian;
  std::string vru_id = "vru0";
  double speed_mps = 1.4;
  double course_half_length_m = 10.0;  // lemniscate scale
  double duration_s = 120.0;
  double gnss_rate_hz = 20.0;
  double gnss_sigma_m = 0.02;
  double radar_rate_hz = 17.0;  // per sensor
  double range_res_m = 0.15;
  double azimuth_res_rad = 2.4 * std::numbers::pi / 180.0;
  double doppler_res_mps = 0.17;
  double detections_per_cycle = 12.0;  // Poisson mean per sensor scan
  double clutter_rate = 5.0;           // background detections per frame
  std::uint64_t seed = 1;

  // Scene fixtures.
  GeoFix origin{0.0, 48.0, 9.0, 500.0};
  EnuPoint ego_position{0.0, -2.0, 0.0};
  double ego_yaw_rad = std::numbers::pi / 2.0;  // facing north
  double ego_speed_mps = 0.0;       // constant-velocity scripted ego; 0 = static
  double sensor_fov_rad = 170.0 * std::numbers::pi / 180.0;
  double sensor_max_range_m = 40.0;
  double amplitude_ref_db = 60.0;  // at 1 m, before path loss
  double amplitude_sigma_db = 2.0;
  double ped_footprint_diameter_m = 0.6;
  double cyc_footprint_length_m = 1.8;
  double cyc_footprint_width_m = 0.6;
};

ScenarioConfig default_scenario(VruKind kind);

std::map<std::string, SensorMount> default_mounts();

/// Gerono lemniscate x = s cos(t), y = s sin(t) cos(t), re-parameterized by
/// arc length.
class EightCourse {
 public:
  explicit EightCourse(double scale_m);

  double total_length_m() const { return total_length_; }

  struct CoursePose {
    EnuPoint pos;
    double yaw_rad = 0.0;       // travel direction for increasing arc length
    double curvature = 0.0;     // signed
  };

  CoursePose pose_at_arclength(double s) const;

 private:
  double theta_at_arclength(double s) const;

  double scale_;
  double total_length_ = 0.0;
  std::vector<double> cum_length_;  // at uniform theta grid
};

struct TruthSample {
  double time_s = 0.0;
  EnuPoint pos;
  double yaw_rad = 0.0;
  double speed_mps = 0.0;
  double yaw_rate_rps = 0.0;
};

/// Continuous ground truth: VRU pose along the course plus the ego pose.
class TruthScene {
 public:
  explicit TruthScene(ScenarioConfig cfg);

  const ScenarioConfig& config() const { return cfg_; }
  const EightCourse& course() const { return course_; }

  TruthSample vru_at(double t) const;
  EgoPose ego_at(double t) const;

  /// Half-extents of the true body footprint, in the body frame
  /// (x along yaw). Pedestrian: disc; cyclist: box.
  bool point_in_footprint(const TruthSample& truth, const EnuPoint& p) const;

 private:
  ScenarioConfig cfg_;
  EightCourse course_;
};

TruthScene gen_truth(const ScenarioConfig& cfg);

/// True positions plus isotropic Gaussian noise, converted to geodetic fixes.
std::vector<GeoFix> gen_gnss(const TruthScene& truth, double sigma_m,
                             double rate_hz, std::uint64_t seed);

/// Noiseless ego reference track at the GNSS rate.
std::vector<GeoFix> gen_ego_gnss(const TruthScene& truth, double rate_hz);

struct SimRadar {
  std::vector<RadarFrame> frames;
  std::vector<LabeledDetection> truth_labels;  // flattened, frame order
};

/// Quantized radar frames with per-detection ground-truth labels.
SimRadar gen_radar(const TruthScene& truth,
                   const std::map<std::string, SensorMount>& mounts,
                   std::uint64_t seed);

/// gen_gnss plus a cumulative random-walk bias; drift_rate 0 reproduces
/// gen_gnss exactly. 2-D RMS offset grows as drift_rate * sqrt(t).
std::vector<GeoFix> gen_imu_drift_track(const TruthScene& truth, double sigma_m,
                                        double rate_hz,
                                        double drift_rate_m_per_sqrt_s,
                                        std::uint64_t seed);

}  // namespace vrulabel::simulator
