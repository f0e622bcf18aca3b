#include "vrulabel/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vrulabel/geomath.hpp"

namespace vrulabel::pipeline {

namespace {

using trajectory::SmoothedTrack;
using trajectory::TimedPoint;

/// Ego pose lookup: linear position interpolation and shortest-path yaw
/// interpolation between bracketing smoothed samples.
class EgoPoseProvider {
 public:
  EgoPoseProvider(const EgoInput& ego, const GeoFix& origin,
                  const PipelineParams& params, double clock_offset_s) {
    if (ego.fixes.empty()) {
      throw FormatError("pipeline: ego track is empty");
    }
    edge_tol_ = params.edge_tolerance_s;

    std::vector<TimedPoint> pts(ego.fixes.size());
    for (size_t i = 0; i < ego.fixes.size(); ++i) {
      pts[i].time_s = ego.fixes[i].time_s + clock_offset_s;
      pts[i].pos = geomath::geodetic_to_enu(ego.fixes[i], origin);
    }

    if (pts.size() == 1) {
      static_pose_ = EgoPose{pts[0].time_s, pts[0].pos,
                             ego.fixed_yaw_rad.value_or(0.0), 0.0};
      t_begin_ = -std::numeric_limits<double>::infinity();
      t_end_ = std::numeric_limits<double>::infinity();
      return;
    }

    samples_ = trajectory::smooth_track(pts, params.smoothing_window);
    const SmoothedTrack track("ego", samples_);
    yaw_.resize(samples_.size());
    speed_.resize(samples_.size());
    for (size_t i = 0; i < samples_.size(); ++i) {
      const auto m = track.estimate_motion(samples_[i].time_s, params.motion);
      if (m.stationary) {
        yaw_[i] = ego.fixed_yaw_rad.value_or(m.yaw_rad);
        speed_[i] = 0.0;
      } else {
        yaw_[i] = m.yaw_rad;
        speed_[i] = m.speed_mps;
      }
    }
    t_begin_ = samples_.front().time_s;
    t_end_ = samples_.back().time_s;
  }

  std::optional<EgoPose> pose_at(double t) const {
    if (static_pose_) {
      EgoPose p = *static_pose_;
      p.time_s = t;
      return p;
    }
    if (t < t_begin_ - edge_tol_ || t > t_end_ + edge_tol_) {
      return std::nullopt;
    }
    const double tc = std::clamp(t, t_begin_, t_end_);
    const auto it = std::lower_bound(
        samples_.begin(), samples_.end(), tc,
        [](const TimedPoint& p, double tt) { return p.time_s < tt; });
    size_t hi = std::clamp<size_t>(it - samples_.begin(), 1, samples_.size() - 1);
    const size_t lo = hi - 1;
    const double span = samples_[hi].time_s - samples_[lo].time_s;
    const double f = span > 0.0 ? (tc - samples_[lo].time_s) / span : 0.0;

    EgoPose pose;
    pose.time_s = t;
    pose.position = {
        samples_[lo].pos.east_m + f * (samples_[hi].pos.east_m - samples_[lo].pos.east_m),
        samples_[lo].pos.north_m + f * (samples_[hi].pos.north_m - samples_[lo].pos.north_m),
        0.0};
    pose.yaw_rad = geomath::wrap_angle(
        yaw_[lo] + f * geomath::wrap_angle(yaw_[hi] - yaw_[lo]));
    pose.speed_mps = speed_[lo] + f * (speed_[hi] - speed_[lo]);
    return pose;
  }

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }

 private:
  std::vector<TimedPoint> samples_;
  std::vector<double> yaw_;
  std::vector<double> speed_;
  std::optional<EgoPose> static_pose_;
  double t_begin_ = 0.0;
  double t_end_ = 0.0;
  double edge_tol_ = 0.05;
};

LabeledDetection passthrough_background(const RadarDetection& d,
                                        const SensorMount& mount,
                                        const EgoPose* ego) {
  LabeledDetection lab;
  lab.detection = d;
  lab.pos_vehicle = geomath::detection_to_vehicle(d, mount);
  lab.comp_doppler_mps =
      ego ? geomath::ego_compensate_doppler(d, *ego, mount) : d.radial_speed_mps;
  return lab;
}

}  // namespace

std::vector<LabeledDetection> label_frame(
    const RadarFrame& frame, const EgoPose& ego,
    const std::vector<std::pair<std::string, regions::SelectionRegion>>& gate_list,
    const SensorMount& mount) {
  std::vector<LabeledDetection> out;
  out.reserve(frame.detections.size());
  for (const auto& d : frame.detections) {
    LabeledDetection lab = passthrough_background(d, mount, &ego);
    int matches = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& [track_id, region] : gate_list) {
      if (!regions::contains(region, lab.pos_vehicle)) continue;
      ++matches;
      const EnuPoint c = regions::region_center(region);
      const double dist = std::hypot(lab.pos_vehicle.east_m - c.east_m,
                                     lab.pos_vehicle.north_m - c.north_m);
      if (dist < best_dist) {
        best_dist = dist;
        lab.label = track_id;
        lab.region_id = track_id;
      }
    }
    lab.ambiguous = matches > 1;
    out.push_back(std::move(lab));
  }
  return out;
}

RunResult run(const PipelineParams& params, const ClockOffsets& offsets,
              const EgoInput& ego, const std::vector<VruTrack>& vru_tracks,
              const std::vector<RadarFrame>& frames,
              const std::map<std::string, SensorMount>& mounts) {
  if (ego.fixes.empty()) {
    throw FormatError("pipeline: ego track is empty");
  }
  const GeoFix origin = ego.fixes.front();  // scene origin convention

  RunResult result;
  if (frames.empty()) return result;

  double frames_begin = std::numeric_limits<double>::infinity();
  double frames_end = -std::numeric_limits<double>::infinity();
  for (const auto& f : frames) {
    frames_begin = std::min(frames_begin, f.time_s + offsets.radar_s);
    frames_end = std::max(frames_end, f.time_s + offsets.radar_s);
  }

  // Hard error when any stream cannot overlap the radar data at all.
  const auto check_span = [&](double begin, double end, const std::string& name) {
    if (end < frames_begin || begin > frames_end) {
      throw AlignmentError("pipeline: " + name +
                           " time span is disjoint from the radar frames");
    }
  };
  if (ego.fixes.size() > 1) {
    check_span(ego.fixes.front().time_s + offsets.ego_s,
               ego.fixes.back().time_s + offsets.ego_s, "ego track");
  }

  std::vector<SmoothedTrack> tracks;
  std::vector<VruKind> kinds;
  tracks.reserve(vru_tracks.size());
  for (const auto& vt : vru_tracks) {
    if (vt.fixes.size() < 2) {
      throw FormatError("pipeline: VRU track " + vt.id + " needs >= 2 fixes");
    }
    VruTrack shifted = vt;
    for (auto& f : shifted.fixes) f.time_s += offsets.vru_s;
    check_span(shifted.fixes.front().time_s, shifted.fixes.back().time_s,
               "VRU track " + vt.id);
    tracks.push_back(
        trajectory::make_smoothed_track(shifted, origin, params.smoothing_window));
    kinds.push_back(vt.kind);
  }

  const EgoPoseProvider ego_provider(ego, origin, params, offsets.ego_s);

  for (const auto& frame : frames) {
    const double t = frame.time_s + offsets.radar_s;
    const auto mount_it = mounts.find(frame.sensor_id);
    if (mount_it == mounts.end()) {
      throw FormatError("pipeline: no mount configured for sensor " +
                        frame.sensor_id);
    }
    const SensorMount& mount = mount_it->second;
    result.report.detections_total +=
        static_cast<long long>(frame.detections.size());

    const auto ego_pose = ego_provider.pose_at(t);
    bool skip = !ego_pose.has_value();

    std::vector<std::pair<std::string, regions::SelectionRegion>> gate_list;
    if (!skip) {
      for (size_t i = 0; i < tracks.size(); ++i) {
        const auto pos = tracks[i].position_at(t);
        if (!pos) {
          skip = true;
          break;
        }
        MotionEstimate m = tracks[i].estimate_motion(t, params.motion);
        const EnuPoint center = geomath::enu_to_vehicle(*pos, *ego_pose);
        m.yaw_rad = geomath::wrap_angle(m.yaw_rad - ego_pose->yaw_rad);
        gate_list.emplace_back(
            tracks[i].track_id(),
            regions::region_for(kinds[i], center, m, params.speed_gate_mps));
      }
    }

    if (skip) {
      ++result.report.frames_skipped;
      for (const auto& d : frame.detections) {
        result.labels.push_back(passthrough_background(
            d, mount, ego_pose ? &*ego_pose : nullptr));
      }
      continue;
    }

    auto labeled = label_frame(frame, *ego_pose, gate_list, mount);
    for (const auto& lab : labeled) {
      if (lab.ambiguous) ++result.report.ambiguous_detections;
    }
    result.labels.insert(result.labels.end(),
                         std::make_move_iterator(labeled.begin()),
                         std::make_move_iterator(labeled.end()));
    ++result.report.frames_processed;
  }
  return result;
}

}  // namespace vrulabel::pipeline
