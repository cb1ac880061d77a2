#include "uavswap/geo.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>

namespace uavswap {

namespace {

constexpr double kMetersPerDegree = kEarthRadius * std::numbers::pi / 180.0;

}  // namespace

void validate(const GeoPoint& point) {
  if (!std::isfinite(point.latitude) || std::abs(point.latitude) > 90.0) {
    throw InvalidGeoPoint(fmt::format("latitude {} outside [-90, 90]", point.latitude));
  }
  if (!std::isfinite(point.longitude) || std::abs(point.longitude) > 180.0) {
    throw InvalidGeoPoint(fmt::format("longitude {} outside [-180, 180]", point.longitude));
  }
  if (point.altitude && !std::isfinite(*point.altitude)) {
    throw InvalidGeoPoint("altitude is not finite");
  }
}

LocalPoint to_local_frame(const GeoPoint& point, const GeoPoint& origin) {
  validate(point);
  const double x =
      (point.longitude - origin.longitude) * std::cos(origin.latitude * std::numbers::pi / 180.0) *
      kMetersPerDegree;
  const double y = (point.latitude - origin.latitude) * kMetersPerDegree;
  if (point.altitude && origin.altitude) {
    return {x, y, *point.altitude - *origin.altitude};
  }
  return {x, y};
}

std::vector<LocalPoint> to_local_frame(std::span<const GeoPoint> points, const GeoPoint& origin) {
  if (points.empty()) {
    throw ValidationError("to_local_frame: no points to project");
  }
  validate(origin);
  std::vector<LocalPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(to_local_frame(p, origin));
  return out;
}

GeoPoint to_geo(const LocalPoint& point, const GeoPoint& origin) {
  GeoPoint geo;
  geo.latitude = origin.latitude + point.y() / kMetersPerDegree;
  geo.longitude = origin.longitude +
                  point.x() / (std::cos(origin.latitude * std::numbers::pi / 180.0) * kMetersPerDegree);
  if (point.dim() == 3) geo.altitude = origin.altitude.value_or(0.0) + point.z();
  return geo;
}

}  // namespace uavswap
