#include <doctest.h>

#include <filesystem>
#include <random>

#include "ffnav/effects.hpp"
#include "ffnav/errors.hpp"
#include "ffnav/vehicle.hpp"

using namespace ffnav;

namespace {

std::vector<TrainingSample> random_inputs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0), w(-10.0, 10.0), spd(0.5, 4.0), ang(0.0, 360.0);
  std::vector<TrainingSample> out(n);
  for (auto& s : out) {
    s.current = {u(rng), u(rng)};
    s.wind = {w(rng), w(rng)};
    s.speed_cmd = spd(rng);
    s.heading = bearing_unit(ang(rng));
  }
  return out;
}

}  // namespace

TEST_CASE("convert_to_coordinate_vectors") {
  CHECK(convert_to_coordinate_vectors(0.0, 123.0).norm() == 0.0);
  const auto e = convert_to_coordinate_vectors(1.0, 90.0);
  CHECK(e.x() == doctest::Approx(1.0));
  CHECK(std::abs(e.y()) < 1e-15);
  const auto sw = convert_to_coordinate_vectors(2.0, 225.0);
  CHECK(sw.x() == doctest::Approx(-1.41421356).epsilon(1e-8));
  CHECK(sw.y() == doctest::Approx(-1.41421356).epsilon(1e-8));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> m(0.001, 10.0), d(0.0, 360.0);
  for (int i = 0; i < 1000; ++i) {
    const double mag = m(rng), dir = d(rng);
    const auto v = convert_to_coordinate_vectors(mag, dir);
    REQUIRE(std::abs(std::hypot(v.x(), v.y()) - mag) < 1e-9);
    REQUIRE(std::abs(wrap_signed_angle(bearing_of(v) - dir)) < 1e-9);
  }
}

TEST_CASE("fit recovers a known linear map exactly") {
  auto samples = random_inputs(400, 1);
  const auto& names = recipe_features(kRecipeEnuV1);
  Eigen::MatrixX3d truth(static_cast<Eigen::Index>(names.size()), 3);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  for (Eigen::Index i = 0; i < truth.size(); ++i) truth.data()[i] = c(rng);
  for (auto& s : samples) {
    const Eigen::Vector3d y =
        truth.transpose() * feature_row(kRecipeEnuV1, false, s.current, s.wind, s.speed_cmd, s.heading);
    s.drift = {y(0), y(1)};
    s.deficit = y(2);
  }
  const EffectModel m = fit(samples);
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    REQUIRE(std::abs(m.coefficients().data()[i] - truth.data()[i]) <= 1e-6 * std::abs(truth.data()[i]) + 1e-12);
  }
  CHECK(m.residual_rmse().maxCoeff() < 1e-10);
}

TEST_CASE("fit with an intercept recovers a bias") {
  auto samples = random_inputs(400, 2);
  for (auto& s : samples) {
    s.drift = s.current + EnuVector(0.1, -0.2);
    s.deficit = -s.drift.dot(s.heading);
  }
  const EffectModel m = fit(samples, kRecipeEnuV1, true);
  CHECK(m.coefficient("intercept", 0) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(m.coefficient("intercept", 1) == doctest::Approx(-0.2).epsilon(1e-9));
}

TEST_CASE("all-zero disturbances give zero drift coefficients") {
  auto samples = random_inputs(200, 3);
  for (auto& s : samples) {
    s.current.setZero();
    s.wind.setZero();
    s.drift.setZero();
    s.deficit = 0.0;
  }
  const EffectModel m = fit(samples);
  CHECK(m.coefficients().cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.residual_rmse().maxCoeff() == 0.0);
}

TEST_CASE("fit rejects too few samples and collinear features") {
  CHECK_THROWS_AS(fit(random_inputs(89, 4)), FitError);
  auto samples = random_inputs(200, 5);
  for (auto& s : samples) s.wind = 3.0 * s.current;
  try {
    fit(samples);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("collinear") != std::string::npos);
    CHECK((msg.find("wind") != std::string::npos || msg.find("current") != std::string::npos));
  }
}

TEST_CASE("fit on simulator kinematics recovers current and wind gains") {
  const VehicleParams p;
  auto samples = random_inputs(500, 6);
  for (auto& s : samples) {
    s.drift = s.current + p.wind_drag_factor * s.wind;
    s.deficit = -s.drift.dot(s.heading);
  }
  const EffectModel m = fit(samples);
  CHECK(m.coefficient("current_east", 0) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(m.coefficient("current_north", 1) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(m.coefficient("wind_east", 0) - 0.03) < 0.01);
  CHECK(std::abs(m.coefficient("wind_north", 1) - 0.03) < 0.01);
  CHECK(m.coefficient("current_along", 2) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("predict on held-out states") {
  const VehicleParams p;
  auto train = random_inputs(600, 7);
  for (auto& s : train) {
    s.drift = s.current + p.wind_drag_factor * s.wind;
    s.deficit = -s.drift.dot(s.heading);
  }
  const EffectModel m = fit(train);
  const auto test = random_inputs(300, 8);
  double se = 0.0;
  for (const auto& s : test) {
    const ForceSample f = ForceSample::from_enu(s.current, s.wind);
    const auto e = predict(m, f, s.speed_cmd, s.speed_cmd, bearing_of(s.heading));
    const EnuVector truth = s.current + p.wind_drag_factor * s.wind;
    se += (EnuVector(e.effect_x, e.effect_y) - truth).squaredNorm();
    REQUIRE(std::abs(std::hypot(e.effect_x, e.effect_y) - e.drift_speed) < 1e-9);
  }
  CHECK(std::sqrt(se / static_cast<double>(test.size())) < 0.05);
}

TEST_CASE("predict is linear in the force inputs") {
  const VehicleParams p;
  auto train = random_inputs(600, 9);
  for (auto& s : train) {
    s.drift = s.current + p.wind_drag_factor * s.wind;
    s.deficit = -s.drift.dot(s.heading);
  }
  const EffectModel m = fit(train);
  const EnuVector c1(0.3, -0.4), w1(2.0, 1.0), c2(-0.7, 0.1), w2(-5.0, 3.0);
  const double a = 0.6, b = -1.3, h = 57.0, spd = 2.0;
  auto drift = [&](const EnuVector& c, const EnuVector& w) {
    const auto e = predict(m, ForceSample::from_enu(c, w), spd, spd, h);
    return Eigen::Vector3d(e.effect_x, e.effect_y, e.effect_spd);
  };
  // affine part from the non-force features cancels in the difference from the zero input
  const Eigen::Vector3d z = drift(EnuVector::Zero(), EnuVector::Zero());
  const Eigen::Vector3d lhs = drift(a * c1 + b * c2, a * w1 + b * w2) - z;
  const Eigen::Vector3d rhs = a * (drift(c1, w1) - z) + b * (drift(c2, w2) - z);
  CHECK((lhs - rhs).norm() < 1e-9);
  CHECK(z.norm() < 1e-9);
}

TEST_CASE("oracle predictions") {
  const OracleEffectModel oracle{0.03};
  const auto zero = predict(oracle, ForceSample{}, 2.0, 2.0, 0.0);
  CHECK(zero.effect_spd == 0.0);
  CHECK(zero.effect_x == 0.0);
  CHECK(zero.effect_y == 0.0);

  const auto east = predict(oracle, ForceSample(ForceVector(0.677, 90.0), ForceVector()), 2.0, 2.0, 0.0);
  CHECK(east.effect_x == doctest::Approx(0.677));
  CHECK(std::abs(east.effect_y) < 1e-12);

  const auto down = predict(oracle, ForceSample(ForceVector(1.0, 180.0), ForceVector()), 2.0, 2.0, 180.0);
  CHECK(down.effect_spd == doctest::Approx(-1.0));
  const auto up = predict(oracle, ForceSample(ForceVector(1.0, 180.0), ForceVector()), 2.0, 2.0, 0.0);
  CHECK(up.effect_spd == doctest::Approx(1.0));
}

TEST_CASE("unfitted model is a usage error") {
  CHECK_THROWS_AS(predict(EffectModel{}, ForceSample{}, 2.0, 2.0, 0.0), std::logic_error);
}

TEST_CASE("model and training csv round trip") {
  auto samples = random_inputs(200, 10);
  for (auto& s : samples) {
    s.drift = s.current + 0.03 * s.wind;
    s.deficit = -s.drift.dot(s.heading);
  }
  const auto dir = std::filesystem::temp_directory_path() / "ffnav_effects_test";
  std::filesystem::create_directories(dir);
  write_training_csv(dir / "train.csv", samples);
  const auto back = read_training_csv(dir / "train.csv");
  REQUIRE(back.size() == samples.size());
  CHECK(back[17].wind == samples[17].wind);
  CHECK(back[17].deficit == samples[17].deficit);

  const EffectModel m = fit(back);
  m.save(dir / "model.json");
  const EffectModel l = EffectModel::load(dir / "model.json");
  CHECK(l.coefficients() == m.coefficients());
  CHECK(l.residual_rmse() == m.residual_rmse());
  CHECK(l.recipe() == kRecipeEnuV1);
  CHECK_THROWS_AS(EffectModel::from_json(R"({"format":"other"})"), ConfigError);
  std::filesystem::remove_all(dir);
}
