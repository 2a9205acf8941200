#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "remoteness/types.hpp"

namespace remoteness {

enum class DistanceMetric { Haversine, Euclidean };

const char* to_string(DistanceMetric metric);

// Metric implied by a coordinate mode: great-circle for lon/lat inputs,
// straight-line for projected ones.
inline DistanceMetric metric_for(CoordinateMode mode) {
  return mode == CoordinateMode::Geographic ? DistanceMetric::Haversine
                                            : DistanceMetric::Euclidean;
}

inline constexpr double kEarthRadiusKm = 6371.0088;
inline constexpr double kDegToRad = 0.017453292519943295;

// Great-circle distance in km between two lon/lat points (degrees).
inline double haversine_km(double lon_a, double lat_a, double lon_b,
                           double lat_b) {
  const double phi_a = lat_a * kDegToRad;
  const double phi_b = lat_b * kDegToRad;
  const double dphi = (lat_b - lat_a) * kDegToRad;
  const double dlam = (lon_b - lon_a) * kDegToRad;
  const double sp = std::sin(dphi * 0.5);
  const double sl = std::sin(dlam * 0.5);
  const double h = sp * sp + std::cos(phi_a) * std::cos(phi_b) * sl * sl;
  // h can creep above 1 by rounding for near-antipodal pairs.
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(h, 1.0)));
}

// Straight-line distance in km between two planar points in meters.
inline double euclidean_km(double x_a, double y_a, double x_b, double y_b) {
  const double dx = x_a - x_b;
  const double dy = y_a - y_b;
  return std::sqrt(dx * dx + dy * dy) / 1000.0;
}

inline double distance_km(DistanceMetric metric, double x_a, double y_a,
                          double x_b, double y_b) {
  return metric == DistanceMetric::Haversine
             ? haversine_km(x_a, y_a, x_b, y_b)
             : euclidean_km(x_a, y_a, x_b, y_b);
}

inline double distance_km(DistanceMetric metric, const PlaceRecord& a,
                          const PlaceRecord& b) {
  return distance_km(metric, a.x, a.y, b.x, b.y);
}

// Maps lon/lat (degrees) onto the unit sphere. Chord length is monotone in
// great-circle distance, so exact nearest-neighbor search can prune in this
// 3-d space without breaking great-circle ordering.
inline std::array<double, 3> unit_sphere_point(double lon, double lat) {
  const double phi = lat * kDegToRad;
  const double lam = lon * kDegToRad;
  const double c = std::cos(phi);
  return {c * std::cos(lam), c * std::sin(lam), std::sin(phi)};
}

// Search-space embedding for either mode: planar points keep meters (z = 0),
// geographic points go to the unit sphere.
inline std::array<double, 3> search_point(CoordinateMode mode, double x,
                                          double y) {
  if (mode == CoordinateMode::Geographic) return unit_sphere_point(x, y);
  return {x, y, 0.0};
}

}  // namespace remoteness
