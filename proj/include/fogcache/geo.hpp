#pragma once

#include <span>
#include <stdexcept>
#include <string>

namespace fogcache {

inline constexpr double kEarthRadiusKm = 6371.0;

// Error raised for malformed input data (trace rows, rule files, topology
// documents). Maps to exit code 3 in the CLI.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Error raised for invalid configuration values. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p);

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// Point reached by travelling `distance_km` along the great circle leaving
// `from` with initial bearing `bearing_rad` (clockwise from north).
GeoPoint destination(const GeoPoint& from, double bearing_rad, double distance_km);

// Planar km coordinates.
struct PlanarPoint {
  double x = 0.0;  // east
  double y = 0.0;  // north
};

// Equirectangular projection about a fixed reference point. Accurate to well
// under 0.1% for extents of a few hundred km away from the poles.
class LocalProjection {
 public:
  explicit LocalProjection(GeoPoint origin);

  // Origin at the arithmetic mean of the given points.
  static LocalProjection about_mean(std::span<const GeoPoint> points);

  PlanarPoint to_plane(const GeoPoint& p) const;
  GeoPoint to_geo(const PlanarPoint& p) const;
  const GeoPoint& origin() const { return origin_; }

 private:
  GeoPoint origin_;
  double km_per_deg_lat_;
  double km_per_deg_lon_;
};

}  // namespace fogcache
