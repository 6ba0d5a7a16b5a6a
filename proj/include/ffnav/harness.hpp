#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ffnav/augment.hpp"
#include "ffnav/control.hpp"
#include "ffnav/effects.hpp"
#include "ffnav/env.hpp"
#include "ffnav/metrics.hpp"
#include "ffnav/vehicle.hpp"

namespace ffnav {

struct StartSpec {
  GeoPoint pos;
  double heading = 0.0;
  double speed = 0.0;  // initial through-water speed
};

struct ControllerSpec {
  Controller kind = Controller::baseline;
  bool oracle = true;              // augmented only
  std::filesystem::path model;     // augmented, when not oracle
};

struct Scenario {
  std::string name = "scenario";
  std::vector<Waypoint> mission;
  std::optional<StartSpec> start;  // unset: derived from the first leg
  FieldSpec current;
  FieldSpec wind;
  VehicleParams vehicle;
  NoiseSpec noise;
  std::uint64_t seed = 1;
  ControllerSpec controller;
  NavigatorConfig nav;
  AugmentConfig augment;
  double dt = 0.1;
  double duration_limit = 600.0;

  // Throws ConfigError or std::invalid_argument on a broken invariant.
  void validate() const;
};

// 20 m behind the first waypoint on the first leg's line, 1 m to starboard, heading along the leg.
StartSpec default_start(const std::vector<Waypoint>& mission);
StartSpec resolved_start(const Scenario& sc);

// JSON <-> Scenario. Relative mission and model paths resolve against base_dir.
Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json scenario_to_json(const Scenario& sc);
Scenario load_scenario(const std::filesystem::path& path);

FieldSpec field_from_json(const nlohmann::json& j);
nlohmann::json field_to_json(const FieldSpec& f);

std::vector<Waypoint> read_mission_csv(const std::filesystem::path& path);
void write_mission_csv(const std::filesystem::path& path, const std::vector<Waypoint>& mission);

EffectSource load_effect_source(const Scenario& sc);

struct RunResult {
  TrajectoryLog log;
  std::vector<TrackSample> series;
  RunScore score;
  bool complete = false;
  std::vector<std::size_t> advanced;  // waypoint indices in the order they were reached
};

RunResult run_scenario(const Scenario& sc);
RunResult run_scenario(const Scenario& sc, const EffectSource& model);

// trajectory.csv, errors.csv, report.csv, resolved_scenario.json
void write_run(const std::filesystem::path& dir, const Scenario& sc, const RunResult& r);
std::string run_report_csv(const RunResult& r);

struct SuiteSpec {
  nlohmann::json scenario_template;  // scenario JSON without a mission
  std::filesystem::path base_dir;
  GeoPoint center;
  double leg_length = 200.0;
  double speed = 2.0;
  double current_axis_bearing = 0.0;
  std::vector<int> orientations{0, 45, 90, 135, 180, 225, 270, 315};
  std::string augmented_model = "oracle";
  bool parallel = true;

  void validate() const;
};

SuiteSpec suite_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json suite_to_json(const SuiteSpec& s);
SuiteSpec load_suite(const std::filesystem::path& path);

// Two-waypoint leg through the suite center on bearing current_axis + orientation.
std::vector<Waypoint> suite_mission(const SuiteSpec& s, int orientation);
Scenario suite_scenario(const SuiteSpec& s, int orientation, Controller c);

struct SuiteResult {
  std::vector<SuiteCell> cells;
  std::optional<ComparisonTable> table;
  bool all_complete = true;
};

// When out is non-empty, every run, mission file and the table are written under it.
SuiteResult run_suite(const SuiteSpec& s, const std::filesystem::path& out = {});

struct FlowSpec {
  double speed = 0.0;
  double direction = 0.0;
  std::optional<Gust> gust;
};

enum class SweepMode { open_loop, closed_loop, both };

struct SweepSpec {
  nlohmann::json scenario_template;
  std::filesystem::path base_dir;
  GeoPoint center;
  std::vector<double> headings{0, 45, 90, 135, 180, 225, 270, 315};
  std::vector<double> speeds{1.0, 2.0, 3.0};
  std::vector<FlowSpec> currents;
  std::vector<FlowSpec> winds{FlowSpec{}};
  double leg_duration = 20.0;
  SweepMode mode = SweepMode::open_loop;
};

SweepSpec sweep_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
SweepSpec load_sweep(const std::filesystem::path& path);

struct TrainingSet {
  std::vector<TrainingSample> samples;
  std::size_t runs = 0;
};

// Features come from noisy sensing through relative_to_absolute; targets are the true drift.
TrainingSet generate_training_logs(const SweepSpec& sweep);

}  // namespace ffnav
