#include "ffnav/augment.hpp"

#include <algorithm>
#include <stdexcept>

namespace ffnav {

void AugmentConfig::validate(double dt) const {
  if (!(k > 0.0)) throw std::invalid_argument("AugmentConfig: k must be > 0");
  if (!(max_offset > 0.0)) throw std::invalid_argument("AugmentConfig: max_offset must be > 0");
  if (!(reference_speed_floor > 0.0)) throw std::invalid_argument("AugmentConfig: reference_speed_floor must be > 0");
  if (!(update_period >= dt)) throw std::invalid_argument("AugmentConfig: update_period must be >= dt");
}

EnuVector intermediate_offset(double d_t, const EnuVector& effect, double spd, const AugmentConfig& cfg) {
  if (!effect.allFinite() || !std::isfinite(d_t)) throw std::invalid_argument("intermediate_offset: non-finite input");
  EnuVector offset = -cfg.k * d_t * effect / std::max(spd, cfg.reference_speed_floor);
  const double m = offset.norm();
  if (m > cfg.max_offset) offset *= cfg.max_offset / m;
  return offset;
}

GeoPoint calc_intermediate_wp(const Waypoint& goal, const AsvState& s, double effect_x, double effect_y,
                              const AugmentConfig& cfg) {
  const double d_t = distance_bearing(s.pos, goal.pos).range;
  return offset_point(goal.pos, intermediate_offset(d_t, EnuVector(effect_x, effect_y), goal.spd_target, cfg));
}

double adjusted_speed(double effect_spd, double spd_target, const VehicleParams& params) {
  if (!(spd_target > 0.0)) throw std::invalid_argument("adjusted_speed: spd_target must be > 0");
  return std::clamp(effect_spd + spd_target, 0.2 * spd_target, params.max_water_speed);
}

AugmentOutput augmented_navigator_step(const AsvState& s, const std::vector<Waypoint>& mission,
                                       const AugmentState& state, const EffectSource& model, const ForceSample& f,
                                       const AugmentConfig& cfg, const NavigatorConfig& nav_cfg,
                                       const VehicleParams& params, double dt) {
  if (mission.empty()) throw std::invalid_argument("augmented_navigator_step: empty mission");
  AugmentOutput out;
  out.next = state;
  out.next.nav = advance_waypoints(s, mission, state.nav, nav_cfg.acceptance_radius);
  const std::size_t idx = out.next.nav.active_wp_index;
  if (idx >= mission.size()) {
    out.next.target.reset();
    out.complete = true;
    return out;
  }

  const Waypoint& goal = mission[idx];
  const bool stale = !out.next.target || out.next.target_wp != idx || s.t >= out.next.next_update - 1e-9;
  if (stale) {
    const EffectPrediction e = predict(model, f, goal.spd_target, s.spd_t, s.h_t);
    const EnuVector xy = convert_to_coordinate_vectors(e.drift_speed, e.effect_dir);
    IntermediateTarget tgt;
    tgt.spd = adjusted_speed(e.effect_spd, goal.spd_target, params);
    const Waypoint normalised{goal.pos, tgt.spd};
    tgt.pos = calc_intermediate_wp(normalised, s, xy.x(), xy.y(), cfg);
    tgt.offset = distance_bearing(goal.pos, tgt.pos).range;
    out.next.target = tgt;
    out.next.target_wp = idx;
    out.next.next_update = s.t + cfg.update_period;
  }

  const NavigatorOutput inner =
      steer_to(s, out.next.target->pos, out.next.target->spd, out.next.nav, nav_cfg, params, dt);
  out.cmd = inner.cmd;
  out.next.nav = inner.next;
  return out;
}

}  // namespace ffnav
