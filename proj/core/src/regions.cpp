#include "vrulabel/regions.hpp"

#include <algorithm>
#include <cmath>

namespace vrulabel::regions {

SelectionRegion pedestrian_region(const EnuPoint& center, const MotionEstimate& m,
                                  double speed_gate_mps) {
  if (m.stationary || m.speed_mps < speed_gate_mps) {
    return Circle{center, kStationaryCircleDiameterM};
  }
  Ellipse e;
  e.center = center;
  e.ax_major_m =
      kPedestrianBaseMajorM + std::min(std::abs(m.speed_mps), kExtraCapM);
  e.ax_minor_m =
      kPedestrianBaseMinorM +
      std::min(std::abs(m.yaw_rate_rps) * kYawRateGainMSecPerRad, kExtraCapM);
  e.yaw_rad = m.yaw_rad;
  return e;
}

SelectionRegion cyclist_region(const EnuPoint& center, const MotionEstimate& m) {
  Rectangle r;
  r.center = center;
  r.length_m = kCyclistLengthM;
  r.width_m =
      kCyclistBaseWidthM +
      std::min(std::abs(m.yaw_rate_rps) * kYawRateGainMSecPerRad, kExtraCapM);
  r.yaw_rad = m.yaw_rad;
  return r;
}

SelectionRegion region_for(VruKind kind, const EnuPoint& center,
                           const MotionEstimate& m, double speed_gate_mps) {
  return kind == VruKind::Pedestrian ? pedestrian_region(center, m, speed_gate_mps)
                                     : cyclist_region(center, m);
}

namespace {

struct ContainsVisitor {
  const EnuPoint& p;

  bool operator()(const Ellipse& e) const {
    const double dx = p.east_m - e.center.east_m;
    const double dy = p.north_m - e.center.north_m;
    const double c = std::cos(e.yaw_rad), s = std::sin(e.yaw_rad);
    const double xr = c * dx + s * dy;
    const double yr = -s * dx + c * dy;
    const double u = 2.0 * xr / e.ax_major_m;
    const double v = 2.0 * yr / e.ax_minor_m;
    return u * u + v * v <= 1.0;
  }

  bool operator()(const Circle& cc) const {
    const double dx = p.east_m - cc.center.east_m;
    const double dy = p.north_m - cc.center.north_m;
    return std::hypot(dx, dy) <= 0.5 * cc.diameter_m;
  }

  bool operator()(const Rectangle& r) const {
    const double dx = p.east_m - r.center.east_m;
    const double dy = p.north_m - r.center.north_m;
    const double c = std::cos(r.yaw_rad), s = std::sin(r.yaw_rad);
    const double xr = c * dx + s * dy;
    const double yr = -s * dx + c * dy;
    return std::abs(xr) <= 0.5 * r.length_m && std::abs(yr) <= 0.5 * r.width_m;
  }
};

}  // namespace

bool contains(const SelectionRegion& region, const EnuPoint& p) {
  return std::visit(ContainsVisitor{p}, region);
}

EnuPoint region_center(const SelectionRegion& region) {
  return std::visit([](const auto& r) { return r.center; }, region);
}

}  // namespace vrulabel::regions
