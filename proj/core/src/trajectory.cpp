#include "vrulabel/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vrulabel/geomath.hpp"

namespace vrulabel::trajectory {

namespace {

double dist2d(const EnuPoint& a, const EnuPoint& b) {
  return std::hypot(a.east_m - b.east_m, a.north_m - b.north_m);
}

void require_strictly_increasing(const std::vector<double>& t) {
  for (size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      throw FormatError("trajectory: timestamps must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<TimedPoint> smooth_track(const std::vector<TimedPoint>& points,
                                     int window) {
  if (points.empty()) {
    throw FormatError("smooth_track: empty input");
  }
  if (window < 1 || window % 2 == 0) {
    throw FormatError("smooth_track: window must be odd and >= 1");
  }
  const int n = static_cast<int>(points.size());
  const int half_max = window / 2;
  std::vector<TimedPoint> out(points.size());
  for (int i = 0; i < n; ++i) {
    const int half = std::min({half_max, i, n - 1 - i});
    double e = 0.0, nn = 0.0, u = 0.0;
    for (int j = i - half; j <= i + half; ++j) {
      e += points[j].pos.east_m;
      nn += points[j].pos.north_m;
      u += points[j].pos.up_m;
    }
    const double m = 2.0 * half + 1.0;
    out[i].time_s = points[i].time_s;
    out[i].pos = {e / m, nn / m, u / m};
  }
  return out;
}

CubicSpline::CubicSpline(std::vector<double> knots_t, std::vector<double> values)
    : t_(std::move(knots_t)), y_(std::move(values)) {
  if (t_.size() != y_.size() || t_.size() < 2) {
    throw FormatError("CubicSpline: need >= 2 knots with matching values");
  }
  require_strictly_increasing(t_);

  const size_t n = t_.size();
  y2_.assign(n, 0.0);
  if (n == 2) return;  // natural spline over two knots is the chord

  // Tridiagonal solve for the interior second derivatives; natural end
  // conditions pin y2 to zero at both ends.
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t_[i] - t_[i - 1];
    const double h1 = t_[i + 1] - t_[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  // Forward elimination (lower coefficient at row i is h0 = t[i]-t[i-1]).
  for (size_t i = 2; i + 1 < n; ++i) {
    const double h0 = t_[i] - t_[i - 1];
    const double w = h0 / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (size_t i = n - 2; i >= 1; --i) {
    y2_[i] = (rhs[i] - upper[i] * y2_[i + 1]) / diag[i];
    if (i == 1) break;
  }
}

double CubicSpline::eval(double t) const {
  const size_t n = t_.size();
  size_t hi = std::upper_bound(t_.begin(), t_.end(), t) - t_.begin();
  hi = std::clamp<size_t>(hi, 1, n - 1);
  const size_t lo = hi - 1;
  const double h = t_[hi] - t_[lo];
  const double a = (t_[hi] - t) / h;
  const double b = (t - t_[lo]) / h;
  return a * y_[lo] + b * y_[hi] +
         ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * h * h / 6.0;
}

namespace {

std::vector<double> component(const std::vector<TimedPoint>& s, bool east) {
  std::vector<double> v(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    v[i] = east ? s[i].pos.east_m : s[i].pos.north_m;
  }
  return v;
}

std::vector<double> times(const std::vector<TimedPoint>& s) {
  std::vector<double> v(s.size());
  for (size_t i = 0; i < s.size(); ++i) v[i] = s[i].time_s;
  return v;
}

}  // namespace

TrackSpline::TrackSpline(const std::vector<TimedPoint>& samples)
    : x_(times(samples), component(samples, true)),
      y_(times(samples), component(samples, false)),
      t_begin_(samples.front().time_s),
      t_end_(samples.back().time_s) {}

std::optional<EnuPoint> TrackSpline::position_at(double t) const {
  if (t < t_begin_ - kEdgeToleranceS || t > t_end_ + kEdgeToleranceS) {
    return std::nullopt;
  }
  const double tc = std::clamp(t, t_begin_, t_end_);
  return EnuPoint{x_.eval(tc), y_.eval(tc), 0.0};
}

SmoothedTrack::SmoothedTrack(std::string track_id, std::vector<TimedPoint> samples)
    : track_id_(std::move(track_id)),
      samples_(std::move(samples)),
      spline_(samples_) {}

namespace {

// Total-least-squares direction of samples[lo..hi]: principal axis of the
// 2-D scatter, sign chosen by chronological displacement.
double fit_yaw(const std::vector<TimedPoint>& s, size_t lo, size_t hi,
               double fallback_sign_yaw) {
  const size_t n = hi - lo + 1;
  double me = 0.0, mn = 0.0;
  for (size_t i = lo; i <= hi; ++i) {
    me += s[i].pos.east_m;
    mn += s[i].pos.north_m;
  }
  me /= n;
  mn /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = lo; i <= hi; ++i) {
    const double dx = s[i].pos.east_m - me;
    const double dy = s[i].pos.north_m - mn;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  double yaw = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  const double de = s[hi].pos.east_m - s[lo].pos.east_m;
  const double dn = s[hi].pos.north_m - s[lo].pos.north_m;
  double dot = de * std::cos(yaw) + dn * std::sin(yaw);
  if (std::hypot(de, dn) < 1e-12) {
    dot = std::cos(fallback_sign_yaw) * std::cos(yaw) +
          std::sin(fallback_sign_yaw) * std::sin(yaw);
  }
  if (dot < 0.0) yaw = geomath::wrap_angle(yaw + M_PI);
  return yaw;
}

}  // namespace

MotionEstimate SmoothedTrack::estimate_motion(double t,
                                              const MotionParams& params) const {
  const auto& s = samples_;
  const size_t n = s.size();

  // Anchor = sample nearest t.
  size_t anchor =
      std::lower_bound(s.begin(), s.end(), t,
                       [](const TimedPoint& p, double tt) { return p.time_s < tt; }) -
      s.begin();
  if (anchor == n) {
    anchor = n - 1;
  } else if (anchor > 0 &&
             t - s[anchor - 1].time_s <= s[anchor].time_s - t) {
    --anchor;
  }

  // Time to the next sample regression_max_dist_m away, in each direction.
  // When the track ends first, the time to the track end stands in.
  const auto escape_time = [&](bool forward) {
    if (forward) {
      for (size_t j = anchor + 1; j < n; ++j) {
        if (dist2d(s[j].pos, s[anchor].pos) >= params.regression_max_dist_m) {
          return s[j].time_s - s[anchor].time_s;
        }
      }
      return s[n - 1].time_s - s[anchor].time_s;
    }
    for (size_t j = anchor; j-- > 0;) {
      if (dist2d(s[j].pos, s[anchor].pos) >= params.regression_max_dist_m) {
        return s[anchor].time_s - s[j].time_s;
      }
    }
    return s[anchor].time_s - s[0].time_s;
  };
  const bool stationary = escape_time(true) > params.stationary_threshold_s ||
                          escape_time(false) > params.stationary_threshold_s;

  // Regression window: consecutive neighbors while displacement from the
  // anchor stays within the limit.
  size_t lo = anchor, hi = anchor;
  while (lo > 0 &&
         dist2d(s[lo - 1].pos, s[anchor].pos) <= params.regression_max_dist_m) {
    --lo;
  }
  while (hi + 1 < n &&
         dist2d(s[hi + 1].pos, s[anchor].pos) <= params.regression_max_dist_m) {
    ++hi;
  }
  if (hi == lo && !stationary) {
    std::fprintf(stderr,
                 "estimate_motion: degenerate window at t=%.3f on track %s, "
                 "widening to 3 samples\n",
                 t, track_id_.c_str());
    if (lo > 0) --lo;
    if (hi + 1 < n) ++hi;
    if (hi == lo && lo > 0) --lo;
  }

  MotionEstimate m;
  m.stationary = stationary;

  if (stationary) {
    m.speed_mps = 0.0;
    // Hold the last stable yaw (bookkeeping only; the circle fallback does
    // not use it).
    m.yaw_rad = 0.0;
    const auto yaw_at = [&](size_t k) {
      size_t klo = k, khi = k;
      while (klo > 0 &&
             dist2d(s[klo - 1].pos, s[k].pos) <= params.regression_max_dist_m) {
        --klo;
      }
      while (khi + 1 < n &&
             dist2d(s[khi + 1].pos, s[k].pos) <= params.regression_max_dist_m) {
        ++khi;
      }
      return fit_yaw(s, klo, khi, 0.0);
    };
    const auto stationary_at = [&](size_t k) {
      double fwd = s[n - 1].time_s - s[k].time_s;
      for (size_t j = k + 1; j < n; ++j) {
        if (dist2d(s[j].pos, s[k].pos) >= params.regression_max_dist_m) {
          fwd = s[j].time_s - s[k].time_s;
          break;
        }
      }
      double bwd = s[k].time_s - s[0].time_s;
      for (size_t j = k; j-- > 0;) {
        if (dist2d(s[j].pos, s[k].pos) >= params.regression_max_dist_m) {
          bwd = s[k].time_s - s[j].time_s;
          break;
        }
      }
      return fwd > params.stationary_threshold_s ||
             bwd > params.stationary_threshold_s;
    };
    bool found = false;
    for (size_t k = anchor + 1; k-- > 0;) {
      if (!stationary_at(k)) {
        m.yaw_rad = yaw_at(k);
        found = true;
        break;
      }
    }
    if (!found) {
      for (size_t k = anchor + 1; k < n; ++k) {
        if (!stationary_at(k)) {
          m.yaw_rad = yaw_at(k);
          break;
        }
      }
    }
    return m;
  }

  const double span = s[hi].time_s - s[lo].time_s;
  m.speed_mps = span > 0.0 ? dist2d(s[hi].pos, s[lo].pos) / span : 0.0;
  m.yaw_rad = fit_yaw(s, lo, hi, 0.0);

  // Yaw rate: angular difference quotient between the two half-window fits,
  // attributed at their mid-times.
  size_t a_hi = std::max(anchor, lo + 1);
  size_t b_lo = std::min(anchor, hi - 1);
  if (hi > lo) {
    const double yaw_a = fit_yaw(s, lo, a_hi, m.yaw_rad);
    const double yaw_b = fit_yaw(s, b_lo, hi, m.yaw_rad);
    const double mid_a = 0.5 * (s[lo].time_s + s[a_hi].time_s);
    const double mid_b = 0.5 * (s[b_lo].time_s + s[hi].time_s);
    if (mid_b - mid_a > 1e-12) {
      m.yaw_rate_rps = geomath::wrap_angle(yaw_b - yaw_a) / (mid_b - mid_a);
    }
  }
  return m;
}

SmoothedTrack make_smoothed_track(const VruTrack& track, const GeoFix& origin,
                                  int window) {
  if (track.fixes.size() < 2) {
    throw FormatError("make_smoothed_track: track needs >= 2 fixes");
  }
  std::vector<TimedPoint> pts(track.fixes.size());
  for (size_t i = 0; i < track.fixes.size(); ++i) {
    pts[i].time_s = track.fixes[i].time_s;
    pts[i].pos = geomath::geodetic_to_enu(track.fixes[i], origin);
  }
  return SmoothedTrack(track.id, smooth_track(pts, window));
}

}  // namespace vrulabel::trajectory
