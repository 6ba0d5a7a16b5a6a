#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "ffnav/env.hpp"
#include "ffnav/geo.hpp"

namespace ffnav {

// Absolute (world-frame) current and wind at the vehicle.
struct ForceSample {
  double spd_c = 0.0;
  double dir_c = 0.0;
  double spd_w = 0.0;
  double dir_w = 0.0;

  ForceSample() = default;
  ForceSample(const ForceVector& current, const ForceVector& wind)
      : spd_c(current.speed), dir_c(current.direction), spd_w(wind.speed), dir_w(wind.direction) {}
  static ForceSample from_enu(const EnuVector& current, const EnuVector& wind) {
    return {ForceVector::from_enu(current), ForceVector::from_enu(wind)};
  }

  ForceVector current() const { return ForceVector(spd_c, dir_c); }
  ForceVector wind() const { return ForceVector(spd_w, dir_w); }
};

struct EffectPrediction {
  double effect_spd = 0.0;  // along-heading ground-speed deficit, positive slows progress
  double effect_dir = 0.0;  // world bearing of the predicted drift
  double drift_speed = 0.0;
  double effect_x = 0.0;  // east, m/s
  double effect_y = 0.0;  // north, m/s
};

EnuVector convert_to_coordinate_vectors(double magnitude, double direction_deg);

struct TrainingSample {
  EnuVector current = EnuVector::Zero();
  EnuVector wind = EnuVector::Zero();
  double speed_cmd = 0.0;
  EnuVector heading = EnuVector(0.0, 1.0);  // unit vector
  EnuVector drift = EnuVector::Zero();
  double deficit = 0.0;
};

inline constexpr const char* kRecipeEnuV1 = "enu-v1";

// Feature names for a recipe, in column order (without the intercept).
const std::vector<std::string>& recipe_features(const std::string& recipe);

// One feature row. Force terms enter linearly for a fixed heading.
Eigen::VectorXd feature_row(const std::string& recipe, bool intercept, const EnuVector& current,
                            const EnuVector& wind, double speed_cmd, const EnuVector& heading);

class EffectModel {
 public:
  EffectModel() = default;
  EffectModel(std::string recipe, bool intercept, Eigen::MatrixX3d coefficients, Eigen::Vector3d residual_rmse,
              std::size_t samples);

  bool fitted() const { return coefficients_.rows() > 0; }
  const std::string& recipe() const { return recipe_; }
  bool intercept() const { return intercept_; }
  const Eigen::MatrixX3d& coefficients() const { return coefficients_; }
  const Eigen::Vector3d& residual_rmse() const { return residual_rmse_; }
  std::size_t samples() const { return samples_; }

  // Coefficient of a named feature for output 0 (drift_east), 1 (drift_north) or 2 (deficit).
  double coefficient(const std::string& feature, int output) const;

  void save(const std::filesystem::path& path) const;
  static EffectModel load(const std::filesystem::path& path);
  std::string to_json() const;
  static EffectModel from_json(const std::string& text);

 private:
  std::string recipe_ = kRecipeEnuV1;
  bool intercept_ = false;
  Eigen::MatrixX3d coefficients_;
  Eigen::Vector3d residual_rmse_ = Eigen::Vector3d::Zero();
  std::size_t samples_ = 0;
};

// Ground-truth model: drift = current + wind_drag_factor * wind.
struct OracleEffectModel {
  double wind_drag_factor = 0.03;
};

using EffectSource = std::variant<EffectModel, OracleEffectModel>;

// Throws FitError for too few samples or a degenerate (collinear) feature.
EffectModel fit(const std::vector<TrainingSample>& samples, const std::string& recipe = kRecipeEnuV1,
                bool intercept = false);

// spd_t is accepted for interface parity; recipe enu-v1 does not use it.
// Throws std::logic_error for an unfitted model.
EffectPrediction predict(const EffectModel& model, const ForceSample& f, double spd_target, double spd_t, double h_t);
EffectPrediction predict(const OracleEffectModel& model, const ForceSample& f, double spd_target, double spd_t,
                         double h_t);
EffectPrediction predict(const EffectSource& model, const ForceSample& f, double spd_target, double spd_t, double h_t);

inline constexpr const char* kTrainingHeader =
    "current_east,current_north,wind_east,wind_north,speed_cmd,heading_east,heading_north,drift_east,drift_north,"
    "deficit";

void write_training_csv(const std::filesystem::path& path, const std::vector<TrainingSample>& samples);
std::vector<TrainingSample> read_training_csv(const std::filesystem::path& path);

}  // namespace ffnav
