#include "ffnav/effects.hpp"

#include <Eigen/QR>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ffnav/csv.hpp"
#include "ffnav/errors.hpp"

namespace ffnav {

using nlohmann::json;

EnuVector convert_to_coordinate_vectors(double magnitude, double direction_deg) {
  return magnitude * bearing_unit(direction_deg);
}

const std::vector<std::string>& recipe_features(const std::string& recipe) {
  static const std::vector<std::string> enu_v1{"current_east", "current_north", "wind_east",
                                               "wind_north",   "current_along", "wind_along",
                                               "speed_cmd",    "heading_east",  "heading_north"};
  if (recipe == kRecipeEnuV1) return enu_v1;
  throw ConfigError("unknown feature recipe '" + recipe + "'");
}

Eigen::VectorXd feature_row(const std::string& recipe, bool intercept, const EnuVector& current,
                            const EnuVector& wind, double speed_cmd, const EnuVector& heading) {
  const auto p = recipe_features(recipe).size();
  Eigen::VectorXd x(p + (intercept ? 1 : 0));
  x << current, wind, current.dot(heading), wind.dot(heading), speed_cmd, heading;
  if (intercept) x(p) = 1.0;
  return x;
}

namespace {

std::vector<std::string> column_names(const std::string& recipe, bool intercept) {
  auto names = recipe_features(recipe);
  if (intercept) names.emplace_back("intercept");
  return names;
}

constexpr const char* kOutputs[3] = {"drift_east", "drift_north", "deficit"};

}  // namespace

EffectModel::EffectModel(std::string recipe, bool intercept, Eigen::MatrixX3d coefficients,
                         Eigen::Vector3d residual_rmse, std::size_t samples)
    : recipe_(std::move(recipe)),
      intercept_(intercept),
      coefficients_(std::move(coefficients)),
      residual_rmse_(std::move(residual_rmse)),
      samples_(samples) {
  const auto expected = column_names(recipe_, intercept_).size();
  if (static_cast<std::size_t>(coefficients_.rows()) != expected) {
    throw ConfigError("effect model: expected " + std::to_string(expected) + " coefficient rows for recipe " +
                      recipe_);
  }
  if (!coefficients_.allFinite()) throw ConfigError("effect model: non-finite coefficient");
}

double EffectModel::coefficient(const std::string& feature, int output) const {
  const auto names = column_names(recipe_, intercept_);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == feature) return coefficients_(static_cast<Eigen::Index>(i), output);
  }
  throw std::out_of_range("effect model: no feature '" + feature + "'");
}

EffectModel fit(const std::vector<TrainingSample>& samples, const std::string& recipe, bool intercept) {
  const auto names = column_names(recipe, intercept);
  const auto p = static_cast<Eigen::Index>(names.size());
  const auto n = static_cast<Eigen::Index>(samples.size());
  if (n < 10 * p) {
    throw FitError("fit: need at least " + std::to_string(10 * p) + " samples for " + std::to_string(p) +
                   " features, got " + std::to_string(n));
  }

  Eigen::MatrixXd X(n, p);
  Eigen::MatrixX3d Y(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    X.row(i) = feature_row(recipe, intercept, s.current, s.wind, s.speed_cmd, s.heading).transpose();
    Y.row(i) << s.drift.x(), s.drift.y(), s.deficit;
  }
  if (!X.allFinite() || !Y.allFinite()) throw FitError("fit: non-finite feature or target");

  // all-zero columns stay out of the solve and keep coefficient 0
  std::vector<Eigen::Index> live;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (X.col(j).cwiseAbs().maxCoeff() > 0.0) live.push_back(j);
  }

  Eigen::MatrixX3d B = Eigen::MatrixX3d::Zero(p, 3);
  if (!live.empty()) {
    Eigen::MatrixXd Xl(n, static_cast<Eigen::Index>(live.size()));
    for (std::size_t k = 0; k < live.size(); ++k) Xl.col(static_cast<Eigen::Index>(k)) = X.col(live[k]);
    const Eigen::VectorXd scale = Xl.colwise().norm().transpose();
    Xl = Xl * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xl);
    qr.setThreshold(1e-10);
    if (qr.rank() < Xl.cols()) {
      const auto bad = live[static_cast<std::size_t>(qr.colsPermutation().indices()(qr.rank()))];
      throw FitError("fit: feature matrix is rank deficient; '" + names[static_cast<std::size_t>(bad)] +
                     "' is collinear with other features");
    }
    const Eigen::MatrixXd Bl = qr.solve(Eigen::MatrixXd(Y));
    for (std::size_t k = 0; k < live.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      B.row(live[k]) = Bl.row(kk) / scale(kk);
    }
  }

  const Eigen::MatrixX3d R = Y - X * B;
  const Eigen::Vector3d rmse = (R.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose();
  return EffectModel(recipe, intercept, std::move(B), rmse, samples.size());
}

namespace {

EffectPrediction from_outputs(const EnuVector& drift, double deficit) {
  EffectPrediction out;
  out.effect_spd = deficit;
  out.drift_speed = drift.norm();
  out.effect_dir = bearing_of(drift);
  const EnuVector xy = convert_to_coordinate_vectors(out.drift_speed, out.effect_dir);
  out.effect_x = xy.x();
  out.effect_y = xy.y();
  return out;
}

void check_inputs(const ForceSample& f, double spd_target, double spd_t, double h_t) {
  if (!std::isfinite(f.spd_c) || !std::isfinite(f.dir_c) || !std::isfinite(f.spd_w) || !std::isfinite(f.dir_w) ||
      !std::isfinite(spd_target) || !std::isfinite(spd_t) || !std::isfinite(h_t)) {
    throw std::invalid_argument("predict: non-finite input");
  }
}

}  // namespace

EffectPrediction predict(const EffectModel& model, const ForceSample& f, double spd_target, double spd_t,
                         double h_t) {
  if (!model.fitted()) throw std::logic_error("predict: effect model has not been fitted");
  check_inputs(f, spd_target, spd_t, h_t);
  const Eigen::VectorXd x = feature_row(model.recipe(), model.intercept(), f.current().to_enu(),
                                        f.wind().to_enu(), spd_target, bearing_unit(h_t));
  const Eigen::Vector3d y = model.coefficients().transpose() * x;
  return from_outputs(EnuVector(y(0), y(1)), y(2));
}

EffectPrediction predict(const OracleEffectModel& model, const ForceSample& f, double spd_target, double spd_t,
                         double h_t) {
  check_inputs(f, spd_target, spd_t, h_t);
  const EnuVector drift = f.current().to_enu() + model.wind_drag_factor * f.wind().to_enu();
  return from_outputs(drift, -drift.dot(bearing_unit(h_t)));
}

EffectPrediction predict(const EffectSource& model, const ForceSample& f, double spd_target, double spd_t,
                         double h_t) {
  return std::visit([&](const auto& m) { return predict(m, f, spd_target, spd_t, h_t); }, model);
}

std::string EffectModel::to_json() const {
  json j;
  j["format"] = "ffnav-effect-model";
  j["version"] = 1;
  j["recipe"] = recipe_;
  j["intercept"] = intercept_;
  j["features"] = column_names(recipe_, intercept_);
  j["outputs"] = {kOutputs[0], kOutputs[1], kOutputs[2]};
  json rows = json::array();
  for (Eigen::Index i = 0; i < coefficients_.rows(); ++i) {
    rows.push_back({coefficients_(i, 0), coefficients_(i, 1), coefficients_(i, 2)});
  }
  j["coefficients"] = rows;
  j["residual_rmse"] = {residual_rmse_(0), residual_rmse_(1), residual_rmse_(2)};
  j["samples"] = samples_;
  return j.dump(2) + "\n";
}

EffectModel EffectModel::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "ffnav-effect-model") throw ConfigError("effect model: unrecognised format");
    if (j.at("version").get<int>() != 1) throw ConfigError("effect model: unsupported version");
    const auto recipe = j.at("recipe").get<std::string>();
    const bool intercept = j.at("intercept").get<bool>();
    const auto& rows = j.at("coefficients");
    Eigen::MatrixX3d B(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto r = rows[i].get<std::array<double, 3>>();
      B.row(static_cast<Eigen::Index>(i)) << r[0], r[1], r[2];
    }
    const auto rm = j.at("residual_rmse").get<std::array<double, 3>>();
    return EffectModel(recipe, intercept, std::move(B), Eigen::Vector3d(rm[0], rm[1], rm[2]),
                       j.value("samples", std::size_t{0}));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("effect model: ") + e.what());
  }
}

void EffectModel::save(const std::filesystem::path& path) const {
  auto out = csv::open_for_write(path);
  out << to_json();
}

EffectModel EffectModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open effect model " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void write_training_csv(const std::filesystem::path& path, const std::vector<TrainingSample>& samples) {
  auto out = csv::open_for_write(path);
  out << kTrainingHeader << '\n';
  for (const auto& s : samples) {
    out << csv::num(s.current.x()) << ',' << csv::num(s.current.y()) << ',' << csv::num(s.wind.x()) << ','
        << csv::num(s.wind.y()) << ',' << csv::num(s.speed_cmd) << ',' << csv::num(s.heading.x()) << ','
        << csv::num(s.heading.y()) << ',' << csv::num(s.drift.x()) << ',' << csv::num(s.drift.y()) << ','
        << csv::num(s.deficit) << '\n';
  }
}

std::vector<TrainingSample> read_training_csv(const std::filesystem::path& path) {
  const auto table = csv::read(path, kTrainingHeader);
  std::vector<TrainingSample> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::string ctx = path.string() + " row " + std::to_string(i + 1);
    auto d = [&](std::size_t k) { return csv::to_double(r[k], ctx); };
    TrainingSample s;
    s.current = {d(0), d(1)};
    s.wind = {d(2), d(3)};
    s.speed_cmd = d(4);
    s.heading = {d(5), d(6)};
    s.drift = {d(7), d(8)};
    s.deficit = d(9);
    out.push_back(s);
  }
  return out;
}

}  // namespace ffnav
