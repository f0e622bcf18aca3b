#include "vrulabel/geomath.hpp"

#include <cmath>
#include <string>

namespace vrulabel::geomath {

namespace {

// WGS84
constexpr double kSemiMajorM = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;
constexpr double kEccSq = kFlattening * (2.0 - kFlattening);
constexpr double kDeg2Rad = M_PI / 180.0;

struct Ecef {
  double x, y, z;
};

Ecef geodetic_to_ecef(double lat_deg, double lon_deg, double alt_m) {
  const double lat = lat_deg * kDeg2Rad;
  const double lon = lon_deg * kDeg2Rad;
  const double sin_lat = std::sin(lat), cos_lat = std::cos(lat);
  const double sin_lon = std::sin(lon), cos_lon = std::cos(lon);
  const double n = kSemiMajorM / std::sqrt(1.0 - kEccSq * sin_lat * sin_lat);
  return {(n + alt_m) * cos_lat * cos_lon, (n + alt_m) * cos_lat * sin_lon,
          (n * (1.0 - kEccSq) + alt_m) * sin_lat};
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw FormatError(std::string("geomath: non-finite ") + what);
  }
}

}  // namespace

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w = M_PI;
  return w;
}

EnuPoint geodetic_to_enu(const GeoFix& fix, const GeoFix& origin) {
  require_finite(fix.lat_deg, "lat_deg");
  require_finite(fix.lon_deg, "lon_deg");
  require_finite(fix.alt_m, "alt_m");
  require_finite(origin.lat_deg, "origin lat_deg");
  require_finite(origin.lon_deg, "origin lon_deg");
  require_finite(origin.alt_m, "origin alt_m");

  const Ecef p = geodetic_to_ecef(fix.lat_deg, fix.lon_deg, fix.alt_m);
  const Ecef o = geodetic_to_ecef(origin.lat_deg, origin.lon_deg, origin.alt_m);
  const double dx = p.x - o.x, dy = p.y - o.y, dz = p.z - o.z;

  const double lat0 = origin.lat_deg * kDeg2Rad;
  const double lon0 = origin.lon_deg * kDeg2Rad;
  const double sl = std::sin(lat0), cl = std::cos(lat0);
  const double so = std::sin(lon0), co = std::cos(lon0);

  EnuPoint out;
  out.east_m = -so * dx + co * dy;
  out.north_m = -sl * co * dx - sl * so * dy + cl * dz;
  out.up_m = cl * co * dx + cl * so * dy + sl * dz;
  return out;
}

GeoFix enu_to_geodetic(const EnuPoint& p, const GeoFix& origin, double time_s) {
  const Ecef o = geodetic_to_ecef(origin.lat_deg, origin.lon_deg, origin.alt_m);
  const double lat0 = origin.lat_deg * kDeg2Rad;
  const double lon0 = origin.lon_deg * kDeg2Rad;
  const double sl = std::sin(lat0), cl = std::cos(lat0);
  const double so = std::sin(lon0), co = std::cos(lon0);

  // ENU -> ECEF with the transposed rotation.
  const double x = o.x - so * p.east_m - sl * co * p.north_m + cl * co * p.up_m;
  const double y = o.y + co * p.east_m - sl * so * p.north_m + cl * so * p.up_m;
  const double z = o.z + cl * p.north_m + sl * p.up_m;

  // Bowring's method, two passes.
  const double b = kSemiMajorM * (1.0 - kFlattening);
  const double ep2 = (kSemiMajorM * kSemiMajorM - b * b) / (b * b);
  const double rho = std::hypot(x, y);
  double theta = std::atan2(z * kSemiMajorM, rho * b);
  double lat = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double st = std::sin(theta), ct = std::cos(theta);
    lat = std::atan2(z + ep2 * b * st * st * st,
                     rho - kEccSq * kSemiMajorM * ct * ct * ct);
    theta = std::atan2((1.0 - kFlattening) * std::sin(lat), std::cos(lat));
  }
  const double sin_lat = std::sin(lat);
  const double n = kSemiMajorM / std::sqrt(1.0 - kEccSq * sin_lat * sin_lat);
  const double alt = rho / std::cos(lat) - n;

  GeoFix fix;
  fix.time_s = time_s;
  fix.lat_deg = lat / kDeg2Rad;
  fix.lon_deg = std::atan2(y, x) / kDeg2Rad;
  fix.alt_m = alt;
  return fix;
}

EnuPoint enu_to_vehicle(const EnuPoint& p, const EgoPose& pose) {
  const double dx = p.east_m - pose.position.east_m;
  const double dy = p.north_m - pose.position.north_m;
  const double c = std::cos(pose.yaw_rad), s = std::sin(pose.yaw_rad);
  EnuPoint out;
  out.east_m = c * dx + s * dy;
  out.north_m = -s * dx + c * dy;
  out.up_m = p.up_m - pose.position.up_m;
  return out;
}

EnuPoint vehicle_to_enu(const EnuPoint& p, const EgoPose& pose) {
  const double c = std::cos(pose.yaw_rad), s = std::sin(pose.yaw_rad);
  EnuPoint out;
  out.east_m = c * p.east_m - s * p.north_m + pose.position.east_m;
  out.north_m = s * p.east_m + c * p.north_m + pose.position.north_m;
  out.up_m = p.up_m + pose.position.up_m;
  return out;
}

EnuPoint detection_to_vehicle(const RadarDetection& d, const SensorMount& mount) {
  if (!(d.range_m > 0.0)) {
    throw FormatError("detection_to_vehicle: range must be > 0");
  }
  const double xs = d.range_m * std::cos(d.azimuth_rad);
  const double ys = d.range_m * std::sin(d.azimuth_rad);
  const double c = std::cos(mount.yaw_rad), s = std::sin(mount.yaw_rad);
  EnuPoint out;
  out.east_m = c * xs - s * ys + mount.x_m;
  out.north_m = s * xs + c * ys + mount.y_m;
  return out;
}

double ego_compensate_doppler(const RadarDetection& d, const EgoPose& pose,
                              const SensorMount& mount) {
  if (!(d.range_m > 0.0)) {
    throw FormatError("ego_compensate_doppler: zero-length ray");
  }
  const EnuPoint p = detection_to_vehicle(d, mount);
  const double rx = p.east_m - mount.x_m;
  const double ry = p.north_m - mount.y_m;
  const double norm = std::hypot(rx, ry);
  // Ego velocity in the vehicle frame points along +x.
  return d.radial_speed_mps + pose.speed_mps * rx / norm;
}

}  // namespace vrulabel::geomath

namespace vrulabel {

std::string to_string(VruKind kind) {
  return kind == VruKind::Pedestrian ? "pedestrian" : "cyclist";
}

VruKind vru_kind_from_string(const std::string& s) {
  if (s == "pedestrian") return VruKind::Pedestrian;
  if (s == "cyclist") return VruKind::Cyclist;
  throw FormatError("unknown VRU kind: " + s);
}

}  // namespace vrulabel
