#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ffnav/geo.hpp"

namespace ffnav {

// Flow speed and the bearing it moves toward. Same convention for current and wind.
struct ForceVector {
  double speed = 0.0;
  double direction = 0.0;

  ForceVector() = default;
  // Negative speed flips the direction; direction is wrapped.
  ForceVector(double speed, double direction);

  EnuVector to_enu() const;
  static ForceVector from_enu(const EnuVector& v);
};

struct UniformField {
  ForceVector flow;
};

// Parabolic cross-channel profile about a straight centerline.
struct RiverProfileField {
  GeoPoint centerline_point;
  double axis_bearing = 0.0;
  ForceVector centerline;
  double half_width = 1.0;
};

// Regular lat/lon grid, row-major with latitude as the slow index.
struct GridField {
  double lat0 = 0.0;
  double lon0 = 0.0;
  double dlat = 0.0;
  double dlon = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<ForceVector> nodes;

  const ForceVector& at(std::size_t r, std::size_t c) const { return nodes[r * cols + c]; }
};

struct Gust {
  double amplitude = 0.0;
  double period = 1.0;
};

struct FieldSpec {
  std::variant<UniformField, RiverProfileField, GridField> kind = UniformField{};
  std::optional<Gust> gust;

  static FieldSpec calm() { return {}; }
  static FieldSpec uniform(double speed, double direction) {
    return {UniformField{ForceVector(speed, direction)}, std::nullopt};
  }

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

ForceVector sample(const FieldSpec& field, const GeoPoint& p, double t);
inline ForceVector sample_current(const FieldSpec& field, const GeoPoint& p, double t) {
  return sample(field, p, t);
}
inline ForceVector sample_wind(const FieldSpec& field, const GeoPoint& p, double t) {
  return sample(field, p, t);
}

}  // namespace ffnav
