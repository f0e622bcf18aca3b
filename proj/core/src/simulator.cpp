#include "vrulabel/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "vrulabel/geomath.hpp"

namespace vrulabel::simulator {

namespace {

// Fixed sub-generator stream labels, so e.g. changing the clutter rate does
// not perturb the GNSS noise draws.
enum StreamTag : std::uint64_t {
  kStreamGnss = 1,
  kStreamBody = 2,
  kStreamClutter = 3,
  kStreamDrift = 4,
};

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

double quantize(double v, double res) {
  return res > 0.0 ? std::round(v / res) * res : v;
}

}  // namespace

ScenarioConfig default_scenario(VruKind kind) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.speed_mps = kind == VruKind::Pedestrian ? 1.4 : 3.0;
  return cfg;
}

std::map<std::string, SensorMount> default_mounts() {
  return {{"left", SensorMount{0.3, 0.3, 0.0}},
          {"right", SensorMount{0.3, -0.3, 0.0}}};
}

EightCourse::EightCourse(double scale_m) : scale_(scale_m) {
  if (!(scale_m > 0.0)) {
    throw FormatError("EightCourse: scale must be > 0");
  }
  constexpr int kGrid = 20000;
  cum_length_.assign(kGrid + 1, 0.0);
  double prev_x = scale_, prev_y = 0.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double th = 2.0 * M_PI * i / kGrid;
    const double x = scale_ * std::cos(th);
    const double y = scale_ * std::sin(th) * std::cos(th);
    cum_length_[i] = cum_length_[i - 1] + std::hypot(x - prev_x, y - prev_y);
    prev_x = x;
    prev_y = y;
  }
  total_length_ = cum_length_.back();
}

double EightCourse::theta_at_arclength(double s) const {
  s = std::fmod(s, total_length_);
  if (s < 0.0) s += total_length_;
  const auto it = std::lower_bound(cum_length_.begin(), cum_length_.end(), s);
  const size_t hi = std::clamp<size_t>(it - cum_length_.begin(), 1,
                                       cum_length_.size() - 1);
  const size_t lo = hi - 1;
  const double seg = cum_length_[hi] - cum_length_[lo];
  const double frac = seg > 0.0 ? (s - cum_length_[lo]) / seg : 0.0;
  const int grid = static_cast<int>(cum_length_.size()) - 1;
  return 2.0 * M_PI * (static_cast<double>(lo) + frac) / grid;
}

EightCourse::CoursePose EightCourse::pose_at_arclength(double s) const {
  const double th = theta_at_arclength(s);
  CoursePose p;
  p.pos = {scale_ * std::cos(th), scale_ * std::sin(th) * std::cos(th), 0.0};
  const double dx = -scale_ * std::sin(th);
  const double dy = scale_ * std::cos(2.0 * th);
  const double ddx = -scale_ * std::cos(th);
  const double ddy = -2.0 * scale_ * std::sin(2.0 * th);
  const double speed = std::hypot(dx, dy);
  p.yaw_rad = std::atan2(dy, dx);
  p.curvature = (dx * ddy - dy * ddx) / (speed * speed * speed);
  return p;
}

TruthScene::TruthScene(ScenarioConfig cfg)
    : cfg_(std::move(cfg)), course_(cfg_.course_half_length_m) {}

TruthSample TruthScene::vru_at(double t) const {
  const double s = cfg_.speed_mps * t;
  const auto cp = course_.pose_at_arclength(s);
  TruthSample out;
  out.time_s = t;
  out.pos = cp.pos;
  out.yaw_rad = cp.yaw_rad;
  out.speed_mps = cfg_.speed_mps;
  out.yaw_rate_rps = cp.curvature * cfg_.speed_mps;
  return out;
}

EgoPose TruthScene::ego_at(double t) const {
  EgoPose pose;
  pose.time_s = t;
  pose.yaw_rad = cfg_.ego_yaw_rad;
  pose.speed_mps = cfg_.ego_speed_mps;
  const double c = std::cos(cfg_.ego_yaw_rad), s = std::sin(cfg_.ego_yaw_rad);
  pose.position = {cfg_.ego_position.east_m + cfg_.ego_speed_mps * t * c,
                   cfg_.ego_position.north_m + cfg_.ego_speed_mps * t * s,
                   cfg_.ego_position.up_m};
  return pose;
}

bool TruthScene::point_in_footprint(const TruthSample& truth,
                                    const EnuPoint& p) const {
  const double dx = p.east_m - truth.pos.east_m;
  const double dy = p.north_m - truth.pos.north_m;
  if (cfg_.kind == VruKind::Pedestrian) {
    return std::hypot(dx, dy) <= 0.5 * cfg_.ped_footprint_diameter_m + 1e-12;
  }
  const double c = std::cos(truth.yaw_rad), s = std::sin(truth.yaw_rad);
  const double xr = c * dx + s * dy;
  const double yr = -s * dx + c * dy;
  return std::abs(xr) <= 0.5 * cfg_.cyc_footprint_length_m + 1e-12 &&
         std::abs(yr) <= 0.5 * cfg_.cyc_footprint_width_m + 1e-12;
}

TruthScene gen_truth(const ScenarioConfig& cfg) {
  if (!(cfg.gnss_rate_hz > 0.0) || !(cfg.radar_rate_hz > 0.0)) {
    throw FormatError("gen_truth: rates must be > 0");
  }
  if (cfg.gnss_sigma_m < 0.0) {
    throw FormatError("gen_truth: gnss sigma must be >= 0");
  }
  return TruthScene(cfg);
}

std::vector<GeoFix> gen_gnss(const TruthScene& truth, double sigma_m,
                             double rate_hz, std::uint64_t seed) {
  return gen_imu_drift_track(truth, sigma_m, rate_hz, 0.0, seed);
}

std::vector<GeoFix> gen_imu_drift_track(const TruthScene& truth, double sigma_m,
                                        double rate_hz,
                                        double drift_rate_m_per_sqrt_s,
                                        std::uint64_t seed) {
  const auto& cfg = truth.config();
  auto rng = make_rng(seed, kStreamGnss);
  auto drift_rng = make_rng(seed, kStreamDrift);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const long long count = static_cast<long long>(cfg.duration_s * rate_hz);
  const double dt = 1.0 / rate_hz;
  // Per-axis increments sized so the 2-D RMS offset is drift_rate * sqrt(t).
  const double step_sigma = drift_rate_m_per_sqrt_s * std::sqrt(0.5 * dt);

  std::vector<GeoFix> fixes;
  fixes.reserve(count + 1);
  double bias_e = 0.0, bias_n = 0.0;
  for (long long k = 0; k <= count; ++k) {
    const double t = k / rate_hz;
    const auto s = truth.vru_at(t);
    EnuPoint p = s.pos;
    if (sigma_m > 0.0) {
      p.east_m += sigma_m * gauss(rng);
      p.north_m += sigma_m * gauss(rng);
    }
    if (drift_rate_m_per_sqrt_s > 0.0 && k > 0) {
      bias_e += step_sigma * gauss(drift_rng);
      bias_n += step_sigma * gauss(drift_rng);
    }
    p.east_m += bias_e;
    p.north_m += bias_n;
    fixes.push_back(geomath::enu_to_geodetic(p, cfg.origin, t));
  }
  return fixes;
}

std::vector<GeoFix> gen_ego_gnss(const TruthScene& truth, double rate_hz) {
  const auto& cfg = truth.config();
  const long long count = static_cast<long long>(cfg.duration_s * rate_hz);
  std::vector<GeoFix> fixes;
  fixes.reserve(count + 1);
  for (long long k = 0; k <= count; ++k) {
    const double t = k / rate_hz;
    fixes.push_back(geomath::enu_to_geodetic(truth.ego_at(t).position, cfg.origin, t));
  }
  return fixes;
}

namespace {

struct SensorView {
  double range_m;
  double azimuth_rad;
  bool visible;
};

SensorView project_to_sensor(const EnuPoint& point_enu, const EgoPose& ego,
                             const SensorMount& mount, double fov_rad,
                             double max_range_m) {
  const EnuPoint pv = geomath::enu_to_vehicle(point_enu, ego);
  const double dx = pv.east_m - mount.x_m;
  const double dy = pv.north_m - mount.y_m;
  const double c = std::cos(mount.yaw_rad), s = std::sin(mount.yaw_rad);
  const double xs = c * dx + s * dy;
  const double ys = -s * dx + c * dy;
  SensorView v;
  v.range_m = std::hypot(xs, ys);
  v.azimuth_rad = std::atan2(ys, xs);
  v.visible = v.range_m > 0.0 && v.range_m <= max_range_m &&
              std::abs(v.azimuth_rad) <= 0.5 * fov_rad;
  return v;
}

EnuPoint sensor_origin_enu(const EgoPose& ego, const SensorMount& mount) {
  return geomath::vehicle_to_enu(EnuPoint{mount.x_m, mount.y_m, 0.0}, ego);
}

// Radial speed of a world point with velocity vel, measured from a sensor at
// sensor_pos on an ego moving with ego_vel. Positive = receding.
double raw_radial(const EnuPoint& point, const EnuPoint& sensor_pos,
                  double vel_e, double vel_n, double ego_vel_e,
                  double ego_vel_n) {
  const double rx = point.east_m - sensor_pos.east_m;
  const double ry = point.north_m - sensor_pos.north_m;
  const double norm = std::hypot(rx, ry);
  return ((vel_e - ego_vel_e) * rx + (vel_n - ego_vel_n) * ry) / norm;
}

}  // namespace

SimRadar gen_radar(const TruthScene& truth,
                   const std::map<std::string, SensorMount>& mounts,
                   std::uint64_t seed) {
  const auto& cfg = truth.config();
  auto body_rng = make_rng(seed, kStreamBody);
  auto clutter_rng = make_rng(seed, kStreamClutter);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::poisson_distribution<int> body_count(
      std::max(cfg.detections_per_cycle, 1e-12));
  std::poisson_distribution<int> clutter_count(
      std::max(cfg.clutter_rate, 1e-12));

  SimRadar out;
  const long long frames_per_sensor =
      static_cast<long long>(cfg.duration_s * cfg.radar_rate_hz);

  bool any_truth_positive = false;
  for (long long k = 0; k <= frames_per_sensor; ++k) {
    const double t = k / cfg.radar_rate_hz;
    const auto vru = truth.vru_at(t);
    const EgoPose ego = truth.ego_at(t);
    const double ego_vel_e = ego.speed_mps * std::cos(ego.yaw_rad);
    const double ego_vel_n = ego.speed_mps * std::sin(ego.yaw_rad);
    const double vru_vel_e = vru.speed_mps * std::cos(vru.yaw_rad);
    const double vru_vel_n = vru.speed_mps * std::sin(vru.yaw_rad);
    const double cy = std::cos(vru.yaw_rad), sy = std::sin(vru.yaw_rad);

    for (const auto& [sensor_id, mount] : mounts) {
      RadarFrame frame;
      frame.time_s = t;
      frame.sensor_id = sensor_id;
      const EnuPoint sensor_pos = sensor_origin_enu(ego, mount);

      const int n_body =
          cfg.detections_per_cycle > 0 ? body_count(body_rng) : 0;
      for (int i = 0; i < n_body; ++i) {
        // Sample a body point in the footprint frame (x along yaw).
        double bx, by;
        if (cfg.kind == VruKind::Pedestrian) {
          const double r =
              0.5 * cfg.ped_footprint_diameter_m * std::sqrt(unit(body_rng));
          const double a = 2.0 * M_PI * unit(body_rng);
          bx = r * std::cos(a);
          by = r * std::sin(a);
        } else {
          bx = cfg.cyc_footprint_length_m * (unit(body_rng) - 0.5);
          by = cfg.cyc_footprint_width_m * (unit(body_rng) - 0.5);
        }
        EnuPoint point{vru.pos.east_m + cy * bx - sy * by,
                       vru.pos.north_m + sy * bx + cy * by, 0.0};
        if (!truth.point_in_footprint(vru, point)) {
          throw InvariantError("gen_radar: body sample outside footprint");
        }
        const auto view = project_to_sensor(point, ego, mount,
                                            cfg.sensor_fov_rad,
                                            cfg.sensor_max_range_m);
        if (!view.visible) continue;

        // Rigid-body point velocity: center velocity + yaw-rate term.
        const double off_e = point.east_m - vru.pos.east_m;
        const double off_n = point.north_m - vru.pos.north_m;
        const double vel_e = vru_vel_e - vru.yaw_rate_rps * off_n;
        const double vel_n = vru_vel_n + vru.yaw_rate_rps * off_e;

        RadarDetection d;
        d.time_s = t;
        d.sensor_id = sensor_id;
        d.range_m = std::max(quantize(view.range_m, cfg.range_res_m),
                             cfg.range_res_m > 0 ? cfg.range_res_m : 1e-6);
        d.azimuth_rad = quantize(view.azimuth_rad, cfg.azimuth_res_rad);
        d.radial_speed_mps =
            quantize(raw_radial(point, sensor_pos, vel_e, vel_n, ego_vel_e,
                                ego_vel_n),
                     cfg.doppler_res_mps);
        d.amplitude_db = cfg.amplitude_ref_db -
                         40.0 * std::log10(view.range_m) +
                         cfg.amplitude_sigma_db * gauss(body_rng);

        LabeledDetection lab;
        lab.detection = d;
        lab.label = cfg.vru_id;
        lab.region_id = cfg.vru_id;
        lab.pos_vehicle = geomath::detection_to_vehicle(d, mount);
        lab.comp_doppler_mps = geomath::ego_compensate_doppler(d, ego, mount);
        frame.detections.push_back(d);
        out.truth_labels.push_back(std::move(lab));
        any_truth_positive = true;
      }

      const int n_clutter = cfg.clutter_rate > 0 ? clutter_count(clutter_rng) : 0;
      for (int i = 0; i < n_clutter; ++i) {
        const double r = 1.0 + (cfg.sensor_max_range_m - 1.0) * unit(clutter_rng);
        const double az = cfg.sensor_fov_rad * (unit(clutter_rng) - 0.5);

        RadarDetection d;
        d.time_s = t;
        d.sensor_id = sensor_id;
        d.range_m = std::max(quantize(r, cfg.range_res_m),
                             cfg.range_res_m > 0 ? cfg.range_res_m : 1e-6);
        d.azimuth_rad = quantize(az, cfg.azimuth_res_rad);
        // Static ground clutter.
        const EnuPoint point = geomath::vehicle_to_enu(
            geomath::detection_to_vehicle(
                RadarDetection{t, sensor_id, r, az, 0.0, 0.0}, mount),
            ego);
        d.radial_speed_mps = quantize(
            raw_radial(point, sensor_pos, 0.0, 0.0, ego_vel_e, ego_vel_n),
            cfg.doppler_res_mps);
        d.amplitude_db = cfg.amplitude_ref_db - 10.0 -
                         40.0 * std::log10(r) +
                         cfg.amplitude_sigma_db * gauss(clutter_rng);

        LabeledDetection lab;
        lab.detection = d;
        lab.label = kBackgroundLabel;
        lab.pos_vehicle = geomath::detection_to_vehicle(d, mount);
        lab.comp_doppler_mps = geomath::ego_compensate_doppler(d, ego, mount);
        frame.detections.push_back(d);
        out.truth_labels.push_back(std::move(lab));
      }
      out.frames.push_back(std::move(frame));
    }
  }
  if (!any_truth_positive) {
    std::fprintf(stderr,
                 "gen_radar: footprint never entered any sensor field of "
                 "view; truth-positive set is empty\n");
  }
  return out;
}

}  // namespace vrulabel::simulator
