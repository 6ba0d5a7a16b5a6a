#pragma once

#include <optional>
#include <vector>

#include "ffnav/control.hpp"
#include "ffnav/effects.hpp"

namespace ffnav {

struct AugmentConfig {
  double k = 1.0;
  double max_offset = 150.0;  // m
  double update_period = 1.0;  // s
  double reference_speed_floor = 0.2;  // m/s

  // update_period is checked against the simulation step.
  void validate(double dt) const;
};

struct IntermediateTarget {
  GeoPoint pos;
  double spd = 0.0;
  double offset = 0.0;  // m from the true goal
};

struct AugmentState {
  NavigatorState nav;
  std::optional<IntermediateTarget> target;
  double next_update = 0.0;
  std::size_t target_wp = 0;  // true waypoint the target was computed for
};

// Offset of the intermediate waypoint from the goal: -k * d_t * effect / max(spd, floor),
// clamped to max_offset. spd is the speed the inner loop will be commanded to hold.
EnuVector intermediate_offset(double d_t, const EnuVector& effect, double spd, const AugmentConfig& cfg);

// Aim point anchored at goal.pos. goal.spd_target is the normalising speed.
GeoPoint calc_intermediate_wp(const Waypoint& goal, const AsvState& s, double effect_x, double effect_y,
                              const AugmentConfig& cfg);

double adjusted_speed(double effect_spd, double spd_target, const VehicleParams& params);

struct AugmentOutput {
  ActuatorCommand cmd;
  AugmentState next;
  bool complete = false;
};

// Feed-forward wrapper around the baseline navigator. The effect prediction is refreshed every
// update_period and immediately after a waypoint advance; advancement is judged on the true waypoints.
AugmentOutput augmented_navigator_step(const AsvState& s, const std::vector<Waypoint>& mission,
                                       const AugmentState& state, const EffectSource& model, const ForceSample& f,
                                       const AugmentConfig& cfg, const NavigatorConfig& nav_cfg,
                                       const VehicleParams& params, double dt);

}  // namespace ffnav
