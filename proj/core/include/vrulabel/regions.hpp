#pragma once

#include <variant>

#include "vrulabel/types.hpp"

namespace vrulabel::regions {

// All extents are full lengths (diameters), not semi-axes.

struct Ellipse {
  EnuPoint center;
  double ax_major_m = 0.0;  // along yaw
  double ax_minor_m = 0.0;
  double yaw_rad = 0.0;
};

struct Circle {
  EnuPoint center;
  double diameter_m = 0.0;
};

struct Rectangle {
  EnuPoint center;
  double length_m = 0.0;  // along yaw
  double width_m = 0.0;
  double yaw_rad = 0.0;
};

using SelectionRegion = std::variant<Ellipse, Circle, Rectangle>;

inline constexpr double kPedestrianBaseMajorM = 1.5;
inline constexpr double kPedestrianBaseMinorM = 1.2;
inline constexpr double kStationaryCircleDiameterM = 1.5;
inline constexpr double kCyclistLengthM = 2.5;
inline constexpr double kCyclistBaseWidthM = 1.2;
inline constexpr double kExtraCapM = 1.0;
inline constexpr double kYawRateGainMSecPerRad = 5.0;
inline constexpr double kDefaultSpeedGateMps = 0.05;

/// Adaptive pedestrian gate: ellipse grown by speed and yaw rate, or the
/// fixed circle when stationary or slower than the speed gate.
SelectionRegion pedestrian_region(const EnuPoint& center, const MotionEstimate& m,
                                  double speed_gate_mps = kDefaultSpeedGateMps);

/// Cyclist gate: fixed-length rectangle whose width grows with yaw rate.
/// No stationary special case.
SelectionRegion cyclist_region(const EnuPoint& center, const MotionEstimate& m);

SelectionRegion region_for(VruKind kind, const EnuPoint& center,
                           const MotionEstimate& m,
                           double speed_gate_mps = kDefaultSpeedGateMps);

/// Boundary-inclusive membership.
bool contains(const SelectionRegion& region, const EnuPoint& p);

EnuPoint region_center(const SelectionRegion& region);

}  // namespace vrulabel::regions
