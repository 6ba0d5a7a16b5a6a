#include "ffnav/control.hpp"

#include <algorithm>
#include <stdexcept>

namespace ffnav {

void PidGains::validate() const {
  if (!(kp >= 0.0) || !(ki >= 0.0) || !(kd >= 0.0)) throw std::invalid_argument("PidGains: gains must be >= 0");
  if (!(i_clamp > 0.0)) throw std::invalid_argument("PidGains: i_clamp must be > 0");
}

void NavigatorConfig::validate() const {
  heading.validate();
  speed.validate();
  if (!(acceptance_radius > 0.0)) throw std::invalid_argument("NavigatorConfig: acceptance_radius must be > 0");
}

PidResult pid_step(const PidGains& gains, const PidState& state, double error, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid_step: dt must be > 0");
  PidResult r;
  r.next.integrator = std::clamp(state.integrator + gains.ki * error * dt, -gains.i_clamp, gains.i_clamp);
  const double derivative = state.primed ? (error - state.prev_error) / dt : 0.0;
  r.next.prev_error = error;
  r.next.primed = true;
  r.output = gains.kp * error + r.next.integrator + gains.kd * derivative;
  return r;
}

bool waypoint_reached(const AsvState& s, const Waypoint& wp, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("waypoint_reached: radius must be > 0");
  return distance_bearing(s.pos, wp.pos).range <= radius;
}

NavigatorOutput steer_to(const AsvState& s, const GeoPoint& aim, double speed, const NavigatorState& nav,
                         const NavigatorConfig& cfg, const VehicleParams& params, double dt) {
  const double desired = distance_bearing(s.pos, aim).bearing;
  const double heading_error = wrap_signed_angle(desired - s.h_t);
  const PidResult h = pid_step(cfg.heading, nav.heading_pid, heading_error, dt);
  const PidResult v = pid_step(cfg.speed, nav.speed_pid, speed - s.spd_t, dt);

  NavigatorOutput out;
  out.cmd = ActuatorCommand(speed / params.max_water_speed + v.output, h.output);
  out.next = nav;
  out.next.heading_pid = h.next;
  out.next.speed_pid = v.next;
  return out;
}

NavigatorState advance_waypoints(const AsvState& s, const std::vector<Waypoint>& mission, const NavigatorState& nav,
                                 double radius) {
  NavigatorState n = nav;
  while (n.active_wp_index < mission.size() && waypoint_reached(s, mission[n.active_wp_index], radius)) {
    ++n.active_wp_index;
    n.heading_pid = {};
    n.speed_pid = {};
  }
  return n;
}

NavigatorOutput navigator_step(const AsvState& s, const std::vector<Waypoint>& mission, const NavigatorState& nav,
                               const NavigatorConfig& cfg, const VehicleParams& params, double dt) {
  if (mission.empty()) throw std::invalid_argument("navigator_step: empty mission");
  if (nav.active_wp_index > mission.size()) throw std::invalid_argument("navigator_step: active index out of range");
  const NavigatorState n = advance_waypoints(s, mission, nav, cfg.acceptance_radius);
  if (n.active_wp_index >= mission.size()) return {ActuatorCommand{}, n, true};
  const Waypoint& wp = mission[n.active_wp_index];
  return steer_to(s, wp.pos, wp.spd_target, n, cfg, params, dt);
}

}  // namespace ffnav
