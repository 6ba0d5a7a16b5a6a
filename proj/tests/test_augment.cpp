#include <doctest.h>

#include "ffnav/augment.hpp"

using namespace ffnav;

namespace {

const GeoPoint kOrigin(34.0, -81.0);

AsvState at(const EnuVector& p, double heading = 0.0, double spd = 2.0) {
  AsvState s;
  s.pos = offset_point(kOrigin, p);
  s.h_t = heading;
  s.course = heading;
  s.spd_t = spd;
  s.through_water_speed = spd;
  return s;
}

}  // namespace

TEST_CASE("zero effect leaves the goal in place") {
  const Waypoint goal{offset_point(kOrigin, EnuVector(0.0, 100.0)), 2.0};
  const GeoPoint p = calc_intermediate_wp(goal, at(EnuVector::Zero()), 0.0, 0.0, AugmentConfig{});
  CHECK(p == goal.pos);
}

TEST_CASE("offset is upstream and proportional to distance") {
  const Waypoint goal{kOrigin, 2.0};
  AugmentConfig cfg;
  cfg.max_offset = 25.0;
  const GeoPoint p = calc_intermediate_wp(goal, at(EnuVector(0.0, -100.0)), 0.5, 0.0, cfg);
  const EnuVector d = displacement(goal.pos, p);
  CHECK(d.x() == doctest::Approx(-25.0).epsilon(1e-6));
  CHECK(std::abs(d.y()) < 1e-6);

  const GeoPoint q = calc_intermediate_wp(goal, at(EnuVector(0.0, -10.0)), 0.5, 0.0, cfg);
  CHECK(displacement(goal.pos, q).x() == doctest::Approx(-2.5).epsilon(1e-6));
}

TEST_CASE("offset is clamped to max_offset") {
  AugmentConfig cfg;
  cfg.max_offset = 25.0;
  const EnuVector o = intermediate_offset(1000.0, EnuVector(3.0, -1.0), 2.0, cfg);
  CHECK(o.norm() == doctest::Approx(25.0));
  CHECK(bearing_of(o) == doctest::Approx(bearing_of(EnuVector(-3.0, 1.0))));
}

TEST_CASE("offset magnitude is monotone in distance") {
  const AugmentConfig cfg;
  const EnuVector effect(0.4, 0.3);
  double prev = intermediate_offset(500.0, effect, 2.0, cfg).norm();
  for (double d = 499.0; d >= 0.0; d -= 1.0) {
    const double m = intermediate_offset(d, effect, 2.0, cfg).norm();
    REQUIRE(m <= prev);
    REQUIRE(m <= cfg.max_offset);
    prev = m;
  }
}

TEST_CASE("speed floor guards the normaliser") {
  AugmentConfig cfg;
  cfg.max_offset = 1e6;
  const EnuVector o = intermediate_offset(10.0, EnuVector(0.1, 0.0), 0.01, cfg);
  CHECK(o.x() == doctest::Approx(-10.0 * 0.1 / 0.2));
}

TEST_CASE("adjusted_speed") {
  const VehicleParams p;
  CHECK(adjusted_speed(0.0, 2.0, p) == 2.0);
  CHECK(adjusted_speed(0.677, 2.0, p) == doctest::Approx(2.677));
  CHECK(adjusted_speed(-5.0, 2.0, p) == doctest::Approx(0.4));
  CHECK(adjusted_speed(10.0, 2.0, p) == p.max_water_speed);
  CHECK_THROWS_AS(adjusted_speed(0.0, 0.0, p), std::invalid_argument);
}

TEST_CASE("augmented step with zero effect matches the baseline command") {
  const std::vector<Waypoint> mission{{offset_point(kOrigin, EnuVector(30.0, 100.0)), 2.0}};
  const VehicleParams p;
  const NavigatorConfig nav;
  const AugmentConfig cfg;
  const AsvState s = at(EnuVector(-3.0, 0.0), 10.0, 1.7);
  const auto base = navigator_step(s, mission, {}, nav, p, 0.1);
  const auto aug = augmented_navigator_step(s, mission, {}, OracleEffectModel{0.03}, ForceSample{}, cfg, nav, p, 0.1);
  CHECK(aug.cmd.thrust == base.cmd.thrust);
  CHECK(aug.cmd.rudder == base.cmd.rudder);
  REQUIRE(aug.next.target);
  CHECK(aug.next.target->pos == mission[0].pos);
}

TEST_CASE("augmented step refreshes on schedule and judges arrival on the true goal") {
  const std::vector<Waypoint> mission{{offset_point(kOrigin, EnuVector(0.0, 100.0)), 2.0},
                                      {offset_point(kOrigin, EnuVector(0.0, 200.0)), 2.0}};
  const VehicleParams p;
  const NavigatorConfig nav;
  const AugmentConfig cfg;
  const OracleEffectModel oracle{0.03};
  const ForceSample f(ForceVector(0.677, 90.0), ForceVector());

  AsvState s = at(EnuVector::Zero());
  auto o = augmented_navigator_step(s, mission, {}, oracle, f, cfg, nav, p, 0.1);
  REQUIRE(o.next.target);
  const GeoPoint first = o.next.target->pos;
  CHECK(displacement(mission[0].pos, first).x() < -10.0);
  CHECK(o.next.next_update == doctest::Approx(1.0));

  // before the period elapses the target is held even though d_t changed
  s = at(EnuVector(0.0, 10.0));
  s.t = 0.5;
  o = augmented_navigator_step(s, mission, o.next, oracle, f, cfg, nav, p, 0.1);
  CHECK(o.next.target->pos == first);
  s.t = 1.0;
  o = augmented_navigator_step(s, mission, o.next, oracle, f, cfg, nav, p, 0.1);
  CHECK_FALSE(o.next.target->pos == first);

  // standing on the intermediate point does not advance; standing on the true goal does
  s = AsvState{};
  s.pos = o.next.target->pos;
  s.t = 1.1;
  auto held = augmented_navigator_step(s, mission, o.next, oracle, f, cfg, nav, p, 0.1);
  CHECK(held.next.nav.active_wp_index == 0);
  s.pos = mission[0].pos;
  auto adv = augmented_navigator_step(s, mission, o.next, oracle, f, cfg, nav, p, 0.1);
  CHECK(adv.next.nav.active_wp_index == 1);
  CHECK(adv.next.target_wp == 1);
  CHECK(adv.next.next_update == doctest::Approx(s.t + 1.0));
}

TEST_CASE("augmented adjusted speed is sent to the inner loop") {
  const std::vector<Waypoint> mission{{offset_point(kOrigin, EnuVector(0.0, 100.0)), 2.0}};
  const VehicleParams p;
  const ForceSample against(ForceVector(0.677, 180.0), ForceVector());
  const auto o = augmented_navigator_step(at(EnuVector::Zero()), mission, {}, OracleEffectModel{0.03}, against,
                                          AugmentConfig{}, NavigatorConfig{}, p, 0.1);
  CHECK(o.next.target->spd == doctest::Approx(2.677));
}

TEST_CASE("augment config validation") {
  AugmentConfig c;
  CHECK_NOTHROW(c.validate(0.1));
  c.update_period = 0.05;
  CHECK_THROWS_AS(c.validate(0.1), std::invalid_argument);
  c = AugmentConfig{};
  c.k = 0.0;
  CHECK_THROWS_AS(c.validate(0.1), std::invalid_argument);
}
