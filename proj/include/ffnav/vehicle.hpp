#pragma once

#include <random>

#include "ffnav/effects.hpp"
#include "ffnav/env.hpp"
#include "ffnav/geo.hpp"

namespace ffnav {

// h_t is the hull heading; course is the ground-track bearing. spd_t is speed over ground.
struct AsvState {
  GeoPoint pos;
  double spd_t = 0.0;
  double h_t = 0.0;
  double course = 0.0;
  double through_water_speed = 0.0;
  double t = 0.0;

  EnuVector ground_velocity() const { return spd_t * bearing_unit(course); }
};

struct ActuatorCommand {
  double thrust = 0.0;  // [0, 1]
  double rudder = 0.0;  // [-1, 1], positive turns to starboard

  ActuatorCommand() = default;
  ActuatorCommand(double thrust, double rudder);
};

struct VehicleParams {
  double max_water_speed = 6.25;
  double thrust_time_constant = 1.0;
  double max_turn_rate = 30.0;  // deg/s at full rudder
  double wind_drag_factor = 0.03;

  void validate() const;
};

struct NoiseSpec {
  double sigma_speed = 0.0;  // m/s
  double sigma_dir = 0.0;    // deg

  bool silent() const { return sigma_speed == 0.0 && sigma_dir == 0.0; }
};

struct SensorFrame {
  ForceVector rel_water;  // hull frame, clockwise from the bow
  ForceVector rel_wind;
  GeoPoint gps;
  double gps_speed = 0.0;
  double compass = 0.0;
};

struct Environment {
  FieldSpec current;
  FieldSpec wind;
  LocalFrame frame;
};

inline constexpr double kMaxStep = 0.5;

// Advances one fixed step. Throws std::invalid_argument for dt outside (0, 0.5]
// or a non-finite command.
AsvState step(const AsvState& s, const ActuatorCommand& cmd, const Environment& env, const VehicleParams& params,
              double dt);

// Disturbance velocity acting on the hull: current + wind_drag_factor * wind.
EnuVector drift_velocity(const ForceSample& f, const VehicleParams& params);

// rng is only drawn from when noise is not silent.
SensorFrame sense(const AsvState& s, const Environment& env, const NoiseSpec& noise, std::mt19937_64& rng);
SensorFrame sense(const AsvState& s, const Environment& env);

// Recovered flows slower than this are reported as exactly calm.
inline constexpr double kFlowResolution = 1e-9;

ForceSample relative_to_absolute(const SensorFrame& f, const AsvState& s);

}  // namespace ffnav
