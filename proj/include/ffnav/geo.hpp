#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>

namespace ffnav {

// Equirectangular local projection. Legs are short river segments (< 10 km),
// so a flat-earth approximation with a fixed meridian length is sufficient.
inline constexpr double kMetersPerDegreeLat = 111194.9;

template <typename Scalar>
using Enu = Eigen::Matrix<Scalar, 2, 1>;

// East/north displacement or velocity in meters (or m/s). x() is east, y() is north.
using EnuVector = Enu<double>;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
  return deg * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) {
  return rad * Scalar(180) / std::numbers::pi_v<Scalar>;
}

// Wraps an angle into [0, 360).
template <typename Scalar>
Scalar wrap_angle(Scalar deg) {
  Scalar r = std::fmod(deg, Scalar(360));
  if (r < Scalar(0)) r += Scalar(360);
  // fmod of a tiny negative value can round back up to exactly 360
  if (r >= Scalar(360)) r -= Scalar(360);
  return r;
}

// Wraps an angle into (-180, 180].
template <typename Scalar>
Scalar wrap_signed_angle(Scalar deg) {
  Scalar r = wrap_angle(deg);
  return r > Scalar(180) ? r - Scalar(360) : r;
}

// Unit vector for a compass bearing (clockwise from north).
template <typename Scalar>
Enu<Scalar> bearing_unit(Scalar bearing_deg) {
  const Scalar b = deg2rad(bearing_deg);
  return Enu<Scalar>(std::sin(b), std::cos(b));
}

// Compass bearing of a planar vector, in [0, 360). Zero vector maps to 0.
template <typename Derived>
typename Derived::Scalar bearing_of(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.x() == Scalar(0) && v.y() == Scalar(0)) return Scalar(0);
  return wrap_angle(rad2deg(std::atan2(v.x(), v.y())));
}

// Wraps a longitude into [-180, 180).
double wrap_longitude(double lon);

// WGS84-style position in degrees. Latitude is validated, longitude wrapped.
class GeoPoint {
 public:
  GeoPoint() = default;
  // Throws std::invalid_argument for non-finite input or |lat| > 90.
  GeoPoint(double lat, double lon);

  double lat() const { return lat_; }
  double lon() const { return lon_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_ = 0.0;
  double lon_ = 0.0;
};

struct RangeBearing {
  double range = 0.0;    // meters
  double bearing = 0.0;  // degrees clockwise from true north, [0, 360)
};

// Range and bearing from a to b. Longitude is scaled by the cosine of the
// mean latitude, which makes the range exactly symmetric in (a, b).
RangeBearing distance_bearing(const GeoPoint& a, const GeoPoint& b);

// East/north displacement from a to b, same projection as distance_bearing.
EnuVector displacement(const GeoPoint& a, const GeoPoint& b);

// Point reached by moving `delta` meters from `origin`. Exact inverse of
// displacement(). Throws std::invalid_argument for non-finite delta.
GeoPoint offset_point(const GeoPoint& origin, const EnuVector& delta);

// Fixed-origin planar frame, longitude scaled by cos(origin latitude). Affine.
class LocalFrame {
 public:
  LocalFrame() : LocalFrame(GeoPoint{}) {}
  explicit LocalFrame(const GeoPoint& origin);

  const GeoPoint& origin() const { return origin_; }
  EnuVector to_enu(const GeoPoint& p) const;
  GeoPoint to_geo(const EnuVector& v) const;

 private:
  GeoPoint origin_;
  double meters_per_degree_lon_;
};

}  // namespace ffnav
