#include "ffnav/env.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "ffnav/errors.hpp"

namespace ffnav {

ForceVector::ForceVector(double s, double dir) {
  if (!std::isfinite(s) || !std::isfinite(dir)) throw std::invalid_argument("ForceVector: non-finite");
  if (s < 0.0) {
    s = -s;
    dir += 180.0;
  }
  speed = s;
  direction = s == 0.0 ? 0.0 : wrap_angle(dir);
}

EnuVector ForceVector::to_enu() const { return speed * bearing_unit(direction); }

ForceVector ForceVector::from_enu(const EnuVector& v) {
  ForceVector f;
  f.speed = v.norm();
  f.direction = bearing_of(v);
  return f;
}

namespace {

void check_speed(const ForceVector& f, const char* what) {
  if (!(f.speed >= 0.0) || !std::isfinite(f.speed)) {
    throw std::invalid_argument(std::string(what) + ": speed must be finite and >= 0");
  }
}

double base_speed_floor(const FieldSpec& f) {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UniformField>) {
          return k.flow.speed;
        } else if constexpr (std::is_same_v<K, RiverProfileField>) {
          return k.centerline.speed;
        } else {
          double m = k.nodes.empty() ? 0.0 : k.nodes.front().speed;
          for (const auto& n : k.nodes) m = std::min(m, n.speed);
          return m;
        }
      },
      f.kind);
}

ForceVector sample_kind(const UniformField& u, const GeoPoint&) { return u.flow; }

ForceVector sample_kind(const RiverProfileField& r, const GeoPoint& p) {
  const EnuVector d = displacement(r.centerline_point, p);
  const EnuVector axis = bearing_unit(r.axis_bearing);
  const double lateral = axis.x() * d.y() - axis.y() * d.x();
  const double q = lateral / r.half_width;
  const double scale = std::max(0.0, 1.0 - q * q);
  return ForceVector(scale * r.centerline.speed, r.centerline.direction);
}

ForceVector sample_kind(const GridField& g, const GeoPoint& p) {
  const double fr = (p.lat() - g.lat0) / g.dlat;
  const double fc = wrap_longitude(p.lon() - g.lon0) / g.dlon;
  const double max_r = static_cast<double>(g.rows - 1);
  const double max_c = static_cast<double>(g.cols - 1);
  constexpr double eps = 1e-9;
  if (fr < -eps || fc < -eps || fr > max_r + eps || fc > max_c + eps) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "grid field: point (%.7f, %.7f) outside domain", p.lat(), p.lon());
    throw DomainError(buf);
  }
  const double r = std::clamp(fr, 0.0, max_r);
  const double c = std::clamp(fc, 0.0, max_c);
  const auto r0 = std::min(static_cast<std::size_t>(r), g.rows > 1 ? g.rows - 2 : 0);
  const auto c0 = std::min(static_cast<std::size_t>(c), g.cols > 1 ? g.cols - 2 : 0);
  const std::size_t r1 = g.rows > 1 ? r0 + 1 : r0;
  const std::size_t c1 = g.cols > 1 ? c0 + 1 : c0;
  const double tr = r - static_cast<double>(r0);
  const double tc = c - static_cast<double>(c0);
  return ForceVector::from_enu((1 - tr) * ((1 - tc) * g.at(r0, c0).to_enu() + tc * g.at(r0, c1).to_enu()) +
                               tr * ((1 - tc) * g.at(r1, c0).to_enu() + tc * g.at(r1, c1).to_enu()));
}

}  // namespace

void FieldSpec::validate() const {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UniformField>) {
          check_speed(k.flow, "uniform field");
        } else if constexpr (std::is_same_v<K, RiverProfileField>) {
          check_speed(k.centerline, "river_profile field");
          if (!(k.half_width > 0.0)) throw std::invalid_argument("river_profile field: half_width must be > 0");
        } else {
          if (!(k.dlat > 0.0) || !(k.dlon > 0.0)) throw std::invalid_argument("grid field: spacing must be > 0");
          if (k.rows == 0 || k.cols == 0 || k.nodes.size() != k.rows * k.cols) {
            throw std::invalid_argument("grid field: node count does not match rows x cols");
          }
          for (const auto& n : k.nodes) check_speed(n, "grid field");
        }
      },
      kind);
  if (gust) {
    if (!(gust->period > 0.0)) throw std::invalid_argument("gust: period must be > 0");
    if (!(gust->amplitude >= 0.0)) throw std::invalid_argument("gust: amplitude must be >= 0");
    if (gust->amplitude > 0.0 && !(gust->amplitude < base_speed_floor(*this))) {
      throw std::invalid_argument("gust: amplitude must be below the base speed");
    }
  }
}

ForceVector sample(const FieldSpec& field, const GeoPoint& p, double t) {
  ForceVector f = std::visit([&](const auto& k) { return sample_kind(k, p); }, field.kind);
  if (field.gust && f.speed > 0.0) {
    const double s = f.speed + field.gust->amplitude * std::sin(2.0 * std::numbers::pi * t / field.gust->period);
    f.speed = std::max(0.0, s);
    if (f.speed == 0.0) f.direction = 0.0;
  }
  return f;
}

}  // namespace ffnav
