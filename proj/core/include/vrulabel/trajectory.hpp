#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vrulabel/types.hpp"

namespace vrulabel::trajectory {

struct TimedPoint {
  double time_s = 0.0;
  EnuPoint pos;
};

/// Centered moving average with a symmetrically shrinking window at the
/// edges (first/last samples use window 1, next use 3, ...). Timestamps are
/// unchanged.
std::vector<TimedPoint> smooth_track(const std::vector<TimedPoint>& points,
                                     int window = 9);

/// Natural interpolating cubic spline over one scalar component.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> knots_t, std::vector<double> values);

  double eval(double t) const;  // t assumed within [front, back]

 private:
  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> y2_;  // second derivatives at knots
};

/// Componentwise natural cubic spline x(t), y(t) over track samples.
class TrackSpline {
 public:
  static constexpr double kEdgeToleranceS = 0.05;

  explicit TrackSpline(const std::vector<TimedPoint>& samples);

  /// Clamped evaluation within the edge tolerance; nullopt beyond it.
  std::optional<EnuPoint> position_at(double t) const;

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }

 private:
  CubicSpline x_;
  CubicSpline y_;
  double t_begin_;
  double t_end_;
};

struct MotionParams {
  double regression_max_dist_m = 0.25;
  double stationary_threshold_s = 2.0;
};

/// Immutable smoothed track: moving-averaged samples plus their interpolating
/// spline. Queries are read-only and safe concurrently.
class SmoothedTrack {
 public:
  SmoothedTrack(std::string track_id, std::vector<TimedPoint> samples);

  const std::string& track_id() const { return track_id_; }
  const std::vector<TimedPoint>& samples() const { return samples_; }
  const TrackSpline& spline() const { return spline_; }

  std::optional<EnuPoint> position_at(double t) const {
    return spline_.position_at(t);
  }

  /// Speed/yaw/yaw-rate/stationarity at t from local regression-line fits
  /// over samples within regression_max_dist_m of the anchor sample.
  MotionEstimate estimate_motion(double t, const MotionParams& params = {}) const;

 private:
  std::string track_id_;
  std::vector<TimedPoint> samples_;
  TrackSpline spline_;
};

/// Convenience: geodetic track -> ENU -> smoothed track.
SmoothedTrack make_smoothed_track(const VruTrack& track, const GeoFix& origin,
                                  int window = 9);

}  // namespace vrulabel::trajectory
