#pragma once

#include <cstddef>
#include <vector>

#include "ffnav/geo.hpp"
#include "ffnav/vehicle.hpp"

namespace ffnav {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double i_clamp = 1.0;  // bound on the integral term ki * sum(e dt)

  void validate() const;
};

struct PidState {
  double integrator = 0.0;  // integral term, already scaled by ki
  double prev_error = 0.0;
  bool primed = false;
};

struct PidResult {
  double output = 0.0;
  PidState next;
};

// Rectangle-rule integral. The derivative term is zero on the first call.
PidResult pid_step(const PidGains& gains, const PidState& state, double error, double dt);

struct Waypoint {
  GeoPoint pos;
  double spd_target = 2.0;
};

struct NavigatorState {
  std::size_t active_wp_index = 0;
  PidState heading_pid;
  PidState speed_pid;
};

// Heading loop: degrees of error in, rudder fraction out. Speed loop: m/s in, thrust fraction out.
struct NavigatorConfig {
  PidGains heading{0.05, 0.02, 0.0, 0.4};
  PidGains speed{0.3, 0.1, 0.0, 0.2};
  double acceptance_radius = 2.0;

  void validate() const;
};

struct NavigatorOutput {
  ActuatorCommand cmd;
  NavigatorState next;
  bool complete = false;
};

bool waypoint_reached(const AsvState& s, const Waypoint& wp, double radius);

// Pure pursuit of an arbitrary aim point at a commanded ground speed. No waypoint bookkeeping.
NavigatorOutput steer_to(const AsvState& s, const GeoPoint& aim, double speed, const NavigatorState& nav,
                         const NavigatorConfig& cfg, const VehicleParams& params, double dt);

// Advances past every reached waypoint (resetting both integrators), then steers at the active one.
// Returns complete with a zero command once the mission is exhausted.
NavigatorOutput navigator_step(const AsvState& s, const std::vector<Waypoint>& mission, const NavigatorState& nav,
                               const NavigatorConfig& cfg, const VehicleParams& params, double dt);

// Shared waypoint bookkeeping: index after advancing through reached waypoints.
NavigatorState advance_waypoints(const AsvState& s, const std::vector<Waypoint>& mission, const NavigatorState& nav,
                                 double radius);

}  // namespace ffnav
