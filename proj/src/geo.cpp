#include "fogcache/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fogcache {

namespace {

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = deg2rad(a.lat);
  const double lat2 = deg2rad(b.lat);
  const double dlat = lat2 - lat1;
  const double dlon = deg2rad(b.lon - a.lon);
  const double u = std::sin(dlat / 2.0);
  const double v = std::sin(dlon / 2.0);
  const double h = u * u + std::cos(lat1) * std::cos(lat2) * v * v;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

GeoPoint destination(const GeoPoint& from, double bearing_rad, double distance_km) {
  const double delta = distance_km / kEarthRadiusKm;
  const double lat1 = deg2rad(from.lat);
  const double lon1 = deg2rad(from.lon);
  const double lat2 = std::asin(std::sin(lat1) * std::cos(delta) +
                                std::cos(lat1) * std::sin(delta) * std::cos(bearing_rad));
  const double lon2 =
      lon1 + std::atan2(std::sin(bearing_rad) * std::sin(delta) * std::cos(lat1),
                        std::cos(delta) - std::sin(lat1) * std::sin(lat2));
  double lon = rad2deg(lon2);
  // normalise to [-180, 180]
  lon = std::fmod(lon + 540.0, 360.0) - 180.0;
  return {rad2deg(lat2), lon};
}

LocalProjection::LocalProjection(GeoPoint origin)
    : origin_(origin),
      km_per_deg_lat_(deg2rad(1.0) * kEarthRadiusKm),
      km_per_deg_lon_(deg2rad(1.0) * kEarthRadiusKm * std::cos(deg2rad(origin.lat))) {}

LocalProjection LocalProjection::about_mean(std::span<const GeoPoint> points) {
  if (points.empty()) {
    return LocalProjection(GeoPoint{});
  }
  double lat = 0.0;
  double lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const auto n = static_cast<double>(points.size());
  return LocalProjection(GeoPoint{lat / n, lon / n});
}

PlanarPoint LocalProjection::to_plane(const GeoPoint& p) const {
  return {(p.lon - origin_.lon) * km_per_deg_lon_, (p.lat - origin_.lat) * km_per_deg_lat_};
}

GeoPoint LocalProjection::to_geo(const PlanarPoint& p) const {
  return {origin_.lat + p.y / km_per_deg_lat_, origin_.lon + p.x / km_per_deg_lon_};
}

}  // namespace fogcache
