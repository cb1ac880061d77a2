#pragma once

#include <optional>
#include <span>
#include <vector>

#include "uavswap/model.hpp"

namespace uavswap {

inline constexpr double kEarthRadius = 6'371'000.0;  // m

struct GeoPoint {
  double latitude = 0.0;   // deg
  double longitude = 0.0;  // deg
  std::optional<double> altitude;  // m

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Throws InvalidGeoPoint on out-of-range or non-finite coordinates.
void validate(const GeoPoint& point);

/// Equirectangular tangent-plane projection about `origin`.
/// Points carry z = alt - alt0 when both the point and the origin have an altitude.
std::vector<LocalPoint> to_local_frame(std::span<const GeoPoint> points, const GeoPoint& origin);
LocalPoint to_local_frame(const GeoPoint& point, const GeoPoint& origin);

/// Inverse of to_local_frame.
GeoPoint to_geo(const LocalPoint& point, const GeoPoint& origin);

}  // namespace uavswap
