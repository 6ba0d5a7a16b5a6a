#include "ffnav/vehicle.hpp"

#include <algorithm>
#include <stdexcept>

namespace ffnav {

ActuatorCommand::ActuatorCommand(double th, double rud) {
  if (!std::isfinite(th) || !std::isfinite(rud)) throw std::invalid_argument("ActuatorCommand: non-finite");
  thrust = std::clamp(th, 0.0, 1.0);
  rudder = std::clamp(rud, -1.0, 1.0);
}

void VehicleParams::validate() const {
  if (!(max_water_speed > 0.0) || !(thrust_time_constant > 0.0) || !(max_turn_rate > 0.0)) {
    throw std::invalid_argument("VehicleParams: speeds, time constant and turn rate must be > 0");
  }
  if (!(wind_drag_factor >= 0.0 && wind_drag_factor <= 0.2)) {
    throw std::invalid_argument("VehicleParams: wind_drag_factor must be in [0, 0.2]");
  }
}

EnuVector drift_velocity(const ForceSample& f, const VehicleParams& params) {
  return f.current().to_enu() + params.wind_drag_factor * f.wind().to_enu();
}

AsvState step(const AsvState& s, const ActuatorCommand& cmd, const Environment& env, const VehicleParams& params,
              double dt) {
  if (!(dt > 0.0 && dt <= kMaxStep)) throw std::invalid_argument("step: dt must be in (0, 0.5]");
  if (!std::isfinite(cmd.thrust) || !std::isfinite(cmd.rudder)) throw std::invalid_argument("step: non-finite command");
  const double thrust = std::clamp(cmd.thrust, 0.0, 1.0);
  const double rudder = std::clamp(cmd.rudder, -1.0, 1.0);

  const ForceSample f{sample_current(env.current, s.pos, s.t), sample_wind(env.wind, s.pos, s.t)};

  AsvState n = s;
  n.h_t = wrap_angle(s.h_t + rudder * params.max_turn_rate * dt);
  const double target = thrust * params.max_water_speed;
  n.through_water_speed = target + (s.through_water_speed - target) * std::exp(-dt / params.thrust_time_constant);

  const EnuVector v = n.through_water_speed * bearing_unit(n.h_t) + drift_velocity(f, params);
  n.pos = env.frame.to_geo(env.frame.to_enu(s.pos) + v * dt);
  n.spd_t = v.norm();
  n.course = bearing_of(v);
  n.t = s.t + dt;
  return n;
}

namespace {

ForceVector to_hull(const EnuVector& rel, double heading) {
  ForceVector f = ForceVector::from_enu(rel);
  if (f.speed > 0.0) f.direction = wrap_angle(f.direction - heading);
  return f;
}

void perturb(ForceVector& f, const NoiseSpec& noise, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double ds = noise.sigma_speed * n01(rng);
  const double dd = noise.sigma_dir * n01(rng);
  f = ForceVector(f.speed + ds, f.direction + dd);
}

}  // namespace

SensorFrame sense(const AsvState& s, const Environment& env, const NoiseSpec& noise, std::mt19937_64& rng) {
  const EnuVector g = s.ground_velocity();
  SensorFrame out;
  out.rel_water = to_hull(sample_current(env.current, s.pos, s.t).to_enu() - g, s.h_t);
  out.rel_wind = to_hull(sample_wind(env.wind, s.pos, s.t).to_enu() - g, s.h_t);
  if (!noise.silent()) {
    perturb(out.rel_water, noise, rng);
    perturb(out.rel_wind, noise, rng);
  }
  out.gps = s.pos;
  out.gps_speed = s.spd_t;
  out.compass = s.h_t;
  return out;
}

SensorFrame sense(const AsvState& s, const Environment& env) {
  std::mt19937_64 unused;
  return sense(s, env, NoiseSpec{}, unused);
}

ForceSample relative_to_absolute(const SensorFrame& f, const AsvState& s) {
  const EnuVector g = s.ground_velocity();
  const EnuVector water = f.rel_water.speed * bearing_unit(f.rel_water.direction + s.h_t) + g;
  const EnuVector wind = f.rel_wind.speed * bearing_unit(f.rel_wind.direction + s.h_t) + g;
  auto resolved = [](const EnuVector& v) { return v.norm() < kFlowResolution ? EnuVector::Zero().eval() : v; };
  return ForceSample::from_enu(resolved(water), resolved(wind));
}

}  // namespace ffnav
