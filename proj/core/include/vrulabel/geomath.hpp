#pragma once

#include "vrulabel/types.hpp"

namespace vrulabel::geomath {

/// Shortest signed angle, result in (-pi, pi].
double wrap_angle(double a);

/// WGS84 geodetic -> local ENU tangent plane anchored at origin.
EnuPoint geodetic_to_enu(const GeoFix& fix, const GeoFix& origin);

/// Exact inverse of geodetic_to_enu about the same origin.
GeoFix enu_to_geodetic(const EnuPoint& p, const GeoFix& origin, double time_s);

/// ENU -> vehicle frame (x forward, y left): translate by -position, rotate
/// by -yaw.
EnuPoint enu_to_vehicle(const EnuPoint& p, const EgoPose& pose);

/// Inverse of enu_to_vehicle.
EnuPoint vehicle_to_enu(const EnuPoint& p, const EgoPose& pose);

/// Polar detection in the sensor frame -> Cartesian vehicle frame.
EnuPoint detection_to_vehicle(const RadarDetection& d, const SensorMount& mount);

/// Removes the ego platform's velocity component from the measured radial
/// speed. A static world point compensates to zero.
double ego_compensate_doppler(const RadarDetection& d, const EgoPose& pose,
                              const SensorMount& mount);

}  // namespace vrulabel::geomath
