#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ffnav/augment.hpp"
#include "ffnav/control.hpp"
#include "ffnav/effects.hpp"
#include "ffnav/vehicle.hpp"

namespace ffnav {

struct TrajectoryRecord {
  double t = 0.0;
  AsvState state;
  std::size_t wp_index = 0;  // active true waypoint
  std::optional<IntermediateTarget> target;
  ForceSample force;
  ActuatorCommand cmd;
};

using TrajectoryLog = std::vector<TrajectoryRecord>;

inline constexpr const char* kTrajectoryHeader =
    "t,lat,lon,spd_t,h_t,wp_index,int_lat,int_lon,int_spd,spd_c,dir_c,spd_w,dir_w,thrust,rudder";

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryLog& log);
// Restores what the CSV carries; course, through-water speed and the target offset are not logged.
TrajectoryLog read_trajectory_csv(const std::filesystem::path& path);

struct TrackSample {
  std::size_t record = 0;  // index into the log
  std::size_t leg = 0;     // leg k runs from waypoint k-1 to waypoint k
  double error = 0.0;      // signed, positive to starboard of the leg direction
  EnuVector pos = EnuVector::Zero();
};

// Scored samples only: records before the first waypoint is reached, after mission completion,
// and before the vehicle first comes within 2 * acceptance_radius of the first leg's start are dropped.
// Throws ScoringError for coincident consecutive waypoints or an empty log.
std::vector<TrackSample> cross_track_series(const TrajectoryLog& log, const std::vector<Waypoint>& mission,
                                            double acceptance_radius = 2.0);

struct ErrorReport {
  std::string label;
  double max_error = 0.0;
  double pct_over_1m = 0.0;
  double path_length = 0.0;
  int sign_changes = 0;
};

// weights[i] is the length of the segment ending at sample i, 0 where no segment precedes it.
// Error is taken as linear along each segment, so a segment crossing the threshold counts in part.
// Throws std::invalid_argument for an empty series or mismatched lengths.
ErrorReport score(const std::vector<double>& errors, const std::vector<double>& weights, double threshold = 1.0);

// Arc-length weights for a scored series, restarting at each leg boundary.
std::vector<double> arc_weights(const std::vector<TrackSample>& series);

// Sign changes among samples whose magnitude exceeds threshold.
int count_sign_changes(const std::vector<double>& errors, double threshold = 1.0);

// Per-leg reports and an aggregate (label "all").
struct RunScore {
  ErrorReport aggregate;
  std::vector<ErrorReport> legs;
};
RunScore score_run(const std::vector<TrackSample>& series);

void write_errors_csv(const std::filesystem::path& path, const TrajectoryLog& log,
                      const std::vector<TrackSample>& series);

enum class Controller { baseline, augmented };
const char* to_string(Controller c);

struct SuiteCell {
  int orientation = 0;  // leg bearing minus current axis, degrees
  Controller controller = Controller::baseline;
  ErrorReport report;
  bool complete = true;
};

inline constexpr int kOrientations[8] = {0, 45, 90, 135, 180, 225, 270, 315};

struct ComparisonTable {
  std::vector<std::string> columns;
  // [controller][column]
  double max_error[2][7] = {};
  double pct_over_1m[2][7] = {};
  bool complete[2][7] = {};

  std::string to_csv() const;
  std::string to_text() const;
};

// Requires all 8 orientations for both controllers. Throws ReportError listing absent cells.
ComparisonTable table_report(const std::vector<SuiteCell>& cells);

}  // namespace ffnav
