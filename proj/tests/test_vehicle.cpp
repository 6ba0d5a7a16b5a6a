#include <doctest.h>

#include <random>

#include "ffnav/vehicle.hpp"

using namespace ffnav;

namespace {

const GeoPoint kOrigin(34.0, -81.0);

Environment env_with(FieldSpec current, FieldSpec wind = FieldSpec::calm()) {
  return {std::move(current), std::move(wind), LocalFrame(kOrigin)};
}

AsvState cruising(double heading, double u, const Environment& env, const VehicleParams& p) {
  AsvState s;
  s.pos = kOrigin;
  s.h_t = heading;
  s.through_water_speed = u;
  const ForceSample f{sample_current(env.current, s.pos, 0.0), sample_wind(env.wind, s.pos, 0.0)};
  const EnuVector v = u * bearing_unit(heading) + drift_velocity(f, p);
  s.spd_t = v.norm();
  s.course = bearing_of(v);
  return s;
}

}  // namespace

TEST_CASE("calm steady cruise advances 0.2 m per step") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::calm());
  const AsvState s = cruising(0.0, 2.0, env, p);
  const AsvState n = step(s, ActuatorCommand(2.0 / p.max_water_speed, 0.0), env, p, 0.1);
  const auto d = env.frame.to_enu(n.pos) - env.frame.to_enu(s.pos);
  CHECK(d.y() == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(std::abs(d.x()) < 1e-12);
  CHECK(n.spd_t == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(n.t == doctest::Approx(0.1));
}

TEST_CASE("cross current adds to the ground velocity") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::uniform(0.5, 90.0));
  const AsvState n = step(cruising(0.0, 2.0, env, p), ActuatorCommand(2.0 / p.max_water_speed, 0.0), env, p, 0.1);
  CHECK(n.spd_t == doctest::Approx(std::sqrt(4.25)).epsilon(1e-12));
  CHECK(n.course == doctest::Approx(rad2deg(std::atan2(0.5, 2.0))).epsilon(1e-12));
  CHECK(n.course == doctest::Approx(14.04).epsilon(1e-3));
  CHECK(n.h_t == 0.0);
}

TEST_CASE("no thrust drifts with the current") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::uniform(1.0, 180.0));
  const AsvState n = step(cruising(0.0, 0.0, env, p), ActuatorCommand(0.0, 0.0), env, p, 0.1);
  CHECK(n.spd_t == doctest::Approx(1.0));
  CHECK(n.course == doctest::Approx(180.0));
}

TEST_CASE("rudder turns at the configured rate") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::calm());
  const AsvState n = step(cruising(350.0, 2.0, env, p), ActuatorCommand(0.32, 1.0), env, p, 0.5);
  CHECK(n.h_t == doctest::Approx(5.0));
  const AsvState m = step(cruising(10.0, 2.0, env, p), ActuatorCommand(0.32, -0.5), env, p, 0.5);
  CHECK(m.h_t == doctest::Approx(2.5));
}

TEST_CASE("through-water speed relaxes with the thrust time constant") {
  VehicleParams p;
  p.thrust_time_constant = 2.0;
  const auto env = env_with(FieldSpec::calm());
  AsvState s = cruising(0.0, 0.0, env, p);
  for (int i = 0; i < 20; ++i) s = step(s, ActuatorCommand(1.0, 0.0), env, p, 0.1);
  CHECK(s.through_water_speed == doctest::Approx(p.max_water_speed * (1.0 - std::exp(-1.0))).epsilon(1e-9));
}

TEST_CASE("step rejects bad inputs") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::calm());
  const AsvState s = cruising(0.0, 2.0, env, p);
  CHECK_THROWS_AS(step(s, ActuatorCommand(0.3, 0.0), env, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step(s, ActuatorCommand(0.3, 0.0), env, p, 0.51), std::invalid_argument);
  ActuatorCommand bad;
  bad.thrust = std::nan("");
  CHECK_THROWS_AS(step(s, bad, env, p, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(ActuatorCommand(std::nan(""), 0.0), std::invalid_argument);
  const ActuatorCommand c(2.0, -3.0);
  CHECK(c.thrust == 1.0);
  CHECK(c.rudder == -1.0);
}

TEST_CASE("step is deterministic") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::uniform(0.8, 33.0), FieldSpec::uniform(6.0, 250.0));
  AsvState a = cruising(12.0, 1.5, env, p), b = a;
  for (int i = 0; i < 500; ++i) {
    const ActuatorCommand c(0.4, std::sin(i * 0.05));
    a = step(a, c, env, p, 0.1);
    b = step(b, c, env, p, 0.1);
  }
  CHECK(a.pos == b.pos);
  CHECK(a.h_t == b.h_t);
  CHECK(a.spd_t == b.spd_t);
}

TEST_CASE("drift superposition is exact") {
  const VehicleParams p;
  const auto calm = env_with(FieldSpec::calm());
  const auto flow = env_with(FieldSpec::uniform(0.9, 123.0), FieldSpec::uniform(5.0, 300.0));
  AsvState a = cruising(40.0, 1.0, calm, p);
  AsvState b = a;
  const ActuatorCommand c(0.5, 0.1);
  const int n = 300;
  for (int i = 0; i < n; ++i) {
    a = step(a, c, calm, p, 0.1);
    b = step(b, c, flow, p, 0.1);
  }
  const EnuVector drift = ForceVector(0.9, 123.0).to_enu() + p.wind_drag_factor * ForceVector(5.0, 300.0).to_enu();
  const EnuVector expect = calm.frame.to_enu(a.pos) + drift * (n * 0.1);
  CHECK((flow.frame.to_enu(b.pos) - expect).norm() < 1e-6);
}

TEST_CASE("sense: stationary vehicle reads the current directly") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::uniform(0.677, 180.0));
  AsvState s;
  s.pos = kOrigin;
  const auto f = sense(s, env);
  CHECK(f.rel_water.speed == doctest::Approx(0.677).epsilon(1e-12));
  CHECK(f.rel_water.direction == doctest::Approx(180.0).epsilon(1e-12));
}

TEST_CASE("sense: moving in still water sees flow from dead ahead") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::calm());
  const auto f = sense(cruising(0.0, 2.0, env, p), env);
  CHECK(f.rel_water.speed == doctest::Approx(2.0));
  CHECK(f.rel_water.direction == doctest::Approx(180.0));
  const auto g = sense(cruising(270.0, 2.0, env, p), env);
  CHECK(g.rel_water.direction == doctest::Approx(180.0));
}

TEST_CASE("sense: zero noise is exact, noise is seeded") {
  const VehicleParams p;
  const auto env = env_with(FieldSpec::uniform(0.5, 45.0), FieldSpec::uniform(3.0, 200.0));
  const AsvState s = cruising(100.0, 2.0, env, p);
  std::mt19937_64 rng(1);
  const auto a = sense(s, env, NoiseSpec{}, rng);
  const auto b = sense(s, env);
  CHECK(a.rel_water.speed == b.rel_water.speed);
  CHECK(a.rel_wind.direction == b.rel_wind.direction);
  CHECK(rng() == std::mt19937_64(1)());

  std::mt19937_64 r1(9), r2(9);
  const NoiseSpec n{0.05, 1.0};
  const auto x = sense(s, env, n, r1);
  const auto y = sense(s, env, n, r2);
  CHECK(x.rel_water.speed == y.rel_water.speed);
  CHECK(x.rel_water.speed != b.rel_water.speed);
}

TEST_CASE("relative_to_absolute inverts sense") {
  const VehicleParams p;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ang(0.0, 360.0), cs(0.0, 3.0), ws(0.0, 15.0), us(0.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double c = cs(rng), cd = ang(rng), w = ws(rng), wd = ang(rng);
    const auto env = env_with(FieldSpec::uniform(c, cd), FieldSpec::uniform(w, wd));
    const AsvState s = cruising(ang(rng), us(rng), env, p);
    const auto f = relative_to_absolute(sense(s, env), s);
    REQUIRE(std::abs(f.spd_c - c) < 1e-9);
    REQUIRE(std::abs(f.spd_w - w) < 1e-9);
    if (c > 1e-3) REQUIRE(std::abs(wrap_signed_angle(f.dir_c - wrap_angle(cd))) < 1e-7);
    if (w > 1e-3) REQUIRE(std::abs(wrap_signed_angle(f.dir_w - wrap_angle(wd))) < 1e-7);
  }
}

TEST_CASE("relative_to_absolute: stationary rotates by heading, zero current stays zero") {
  AsvState s;
  s.pos = kOrigin;
  s.h_t = 30.0;
  SensorFrame f;
  f.rel_water = ForceVector(1.0, 60.0);
  f.rel_wind = ForceVector(2.0, 350.0);
  const auto a = relative_to_absolute(f, s);
  CHECK(a.dir_c == doctest::Approx(90.0));
  CHECK(a.dir_w == doctest::Approx(20.0));
  CHECK(a.spd_c == doctest::Approx(1.0));

  const VehicleParams p;
  const auto env = env_with(FieldSpec::calm());
  const AsvState m = cruising(77.0, 3.0, env, p);
  CHECK(relative_to_absolute(sense(m, env), m).spd_c < 1e-9);
}

TEST_CASE("vehicle params validation") {
  VehicleParams p;
  CHECK_NOTHROW(p.validate());
  p.wind_drag_factor = 0.25;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.wind_drag_factor = 0.03;
  p.max_turn_rate = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("calm water senses back as exactly calm") {
  AsvState s;
  s.pos = GeoPoint(34.0, -81.0);
  s.h_t = 37.0;
  s.course = 41.0;
  s.spd_t = 2.3;
  const Environment env{FieldSpec::calm(), FieldSpec::calm(), LocalFrame(s.pos)};
  const ForceSample f = relative_to_absolute(sense(s, env), s);
  CHECK(f.spd_c == 0.0);
  CHECK(f.spd_w == 0.0);
}
