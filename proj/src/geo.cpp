#include "ffnav/geo.hpp"

#include <stdexcept>
#include <string>

namespace ffnav {

double wrap_longitude(double lon) {
  if (lon >= -180.0 && lon < 180.0) return lon;
  double r = std::fmod(lon + 180.0, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r - 180.0;
}

GeoPoint::GeoPoint(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon)) {
    throw std::invalid_argument("GeoPoint: non-finite coordinate");
  }
  if (lat < -90.0 || lat > 90.0) {
    throw std::invalid_argument("GeoPoint: latitude " + std::to_string(lat) + " outside [-90, 90]");
  }
  lat_ = lat;
  lon_ = wrap_longitude(lon);
}

namespace {

double lon_scale(double lat_deg) { return kMetersPerDegreeLat * std::cos(deg2rad(lat_deg)); }

}  // namespace

EnuVector displacement(const GeoPoint& a, const GeoPoint& b) {
  const double north = (b.lat() - a.lat()) * kMetersPerDegreeLat;
  const double dlon = wrap_longitude(b.lon() - a.lon());
  const double east = dlon * lon_scale(0.5 * (a.lat() + b.lat()));
  return {east, north};
}

RangeBearing distance_bearing(const GeoPoint& a, const GeoPoint& b) {
  const EnuVector d = displacement(a, b);
  const double range = std::hypot(d.x(), d.y());
  return {range, range == 0.0 ? 0.0 : bearing_of(d)};
}

GeoPoint offset_point(const GeoPoint& origin, const EnuVector& delta) {
  if (!delta.allFinite()) throw std::invalid_argument("offset_point: non-finite delta");
  const double lat = origin.lat() + delta.y() / kMetersPerDegreeLat;
  const double lon = origin.lon() + delta.x() / lon_scale(0.5 * (origin.lat() + lat));
  return GeoPoint(lat, lon);
}

LocalFrame::LocalFrame(const GeoPoint& origin)
    : origin_(origin), meters_per_degree_lon_(lon_scale(origin.lat())) {}

EnuVector LocalFrame::to_enu(const GeoPoint& p) const {
  return {wrap_longitude(p.lon() - origin_.lon()) * meters_per_degree_lon_,
          (p.lat() - origin_.lat()) * kMetersPerDegreeLat};
}

GeoPoint LocalFrame::to_geo(const EnuVector& v) const {
  return GeoPoint(origin_.lat() + v.y() / kMetersPerDegreeLat,
                  origin_.lon() + v.x() / meters_per_degree_lon_);
}

}  // namespace ffnav
