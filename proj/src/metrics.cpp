#include "ffnav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ffnav/csv.hpp"
#include "ffnav/errors.hpp"

namespace ffnav {

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryLog& log) {
  auto out = csv::open_for_write(path);
  out << kTrajectoryHeader << '\n';
  for (const auto& r : log) {
    out << csv::num(r.t, 10) << ',' << csv::num(r.state.pos.lat()) << ',' << csv::num(r.state.pos.lon())
        << ',' << csv::num(r.state.spd_t, 10) << ',' << csv::num(r.state.h_t, 10) << ',' << r.wp_index << ',';
    if (r.target) {
      out << csv::num(r.target->pos.lat()) << ',' << csv::num(r.target->pos.lon()) << ','
          << csv::num(r.target->spd, 10) << ',';
    } else {
      out << ",,,";
    }
    out << csv::num(r.force.spd_c, 10) << ',' << csv::num(r.force.dir_c, 10) << ',' << csv::num(r.force.spd_w, 10)
        << ',' << csv::num(r.force.dir_w, 10) << ',' << csv::num(r.cmd.thrust, 10) << ','
        << csv::num(r.cmd.rudder, 10) << '\n';
  }
}

TrajectoryLog read_trajectory_csv(const std::filesystem::path& path) {
  const auto table = csv::read(path, kTrajectoryHeader);
  TrajectoryLog log;
  log.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string ctx = path.string() + " row " + std::to_string(i + 1);
    auto d = [&](std::size_t k) { return csv::to_double(row[k], ctx); };
    TrajectoryRecord r;
    r.t = d(0);
    r.state.pos = GeoPoint(d(1), d(2));
    r.state.spd_t = d(3);
    r.state.h_t = d(4);
    r.state.t = r.t;
    r.wp_index = static_cast<std::size_t>(d(5));
    if (!row[6].empty()) r.target = IntermediateTarget{GeoPoint(d(6), d(7)), d(8), 0.0};
    r.force = ForceSample(ForceVector(d(9), d(10)), ForceVector(d(11), d(12)));
    r.cmd = ActuatorCommand(d(13), d(14));
    log.push_back(r);
  }
  return log;
}

std::vector<TrackSample> cross_track_series(const TrajectoryLog& log, const std::vector<Waypoint>& mission,
                                            double acceptance_radius) {
  if (log.empty()) throw ScoringError("cross_track_series: empty log");
  if (mission.size() < 2) throw ScoringError("cross_track_series: mission needs at least two waypoints");
  const LocalFrame frame(mission.front().pos);
  std::vector<EnuVector> wp(mission.size());
  for (std::size_t i = 0; i < mission.size(); ++i) wp[i] = frame.to_enu(mission[i].pos);
  for (std::size_t i = 1; i < wp.size(); ++i) {
    if ((wp[i] - wp[i - 1]).norm() < 1e-9) {
      throw ScoringError("cross_track_series: waypoints " + std::to_string(i - 1) + " and " + std::to_string(i) +
                         " coincide");
    }
  }

  std::vector<TrackSample> out;
  bool acquired = false;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const EnuVector p = frame.to_enu(log[i].state.pos);
    if (!acquired) acquired = (p - wp[0]).norm() <= 2.0 * acceptance_radius;
    const auto leg = log[i].wp_index;
    if (!acquired || leg == 0 || leg >= mission.size()) continue;
    const EnuVector u = (wp[leg] - wp[leg - 1]).normalized();
    const EnuVector rel = p - wp[leg - 1];
    out.push_back({i, leg, rel.x() * u.y() - rel.y() * u.x(), p});
  }
  return out;
}

namespace {

// fraction of a linear ramp a -> b lying strictly above t
double fraction_above(double a, double b, double t) {
  if (a > t && b > t) return 1.0;
  if (a <= t && b <= t) return 0.0;
  return (std::max(a, b) - t) / std::abs(b - a);
}

}  // namespace

ErrorReport score(const std::vector<double>& errors, const std::vector<double>& weights, double threshold) {
  if (errors.empty()) throw std::invalid_argument("score: empty series");
  if (errors.size() != weights.size()) throw std::invalid_argument("score: errors and weights differ in length");
  ErrorReport r;
  double over = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double e = errors[i];
    r.max_error = std::max(r.max_error, std::abs(e));
    r.path_length += weights[i];
    if (weights[i] <= 0.0) continue;
    if (i == 0) {
      if (std::abs(e) > threshold) over += weights[i];
      continue;
    }
    const double a = errors[i - 1];
    over += weights[i] * (fraction_above(a, e, threshold) + fraction_above(-a, -e, threshold));
  }
  r.pct_over_1m = r.path_length > 0.0 ? 100.0 * over / r.path_length : 0.0;
  r.sign_changes = count_sign_changes(errors, threshold);
  return r;
}

std::vector<double> arc_weights(const std::vector<TrackSample>& series) {
  std::vector<double> w(series.size(), 0.0);
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].leg == series[i - 1].leg) w[i] = (series[i].pos - series[i - 1].pos).norm();
  }
  return w;
}

int count_sign_changes(const std::vector<double>& errors, double threshold) {
  int changes = 0;
  int last = 0;
  for (double e : errors) {
    if (std::abs(e) <= threshold) continue;
    const int s = e > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

RunScore score_run(const std::vector<TrackSample>& series) {
  RunScore rs;
  rs.aggregate.label = "all";
  if (series.empty()) return rs;
  const auto w = arc_weights(series);
  std::vector<double> e;
  e.reserve(series.size());
  for (const auto& s : series) e.push_back(s.error);
  rs.aggregate = score(e, w);
  rs.aggregate.label = "all";

  std::size_t begin = 0;
  while (begin < series.size()) {
    std::size_t end = begin;
    while (end < series.size() && series[end].leg == series[begin].leg) ++end;
    ErrorReport leg = score(std::vector<double>(e.begin() + static_cast<std::ptrdiff_t>(begin),
                                                e.begin() + static_cast<std::ptrdiff_t>(end)),
                            std::vector<double>(w.begin() + static_cast<std::ptrdiff_t>(begin),
                                                w.begin() + static_cast<std::ptrdiff_t>(end)));
    leg.label = "leg" + std::to_string(series[begin].leg);
    rs.legs.push_back(leg);
    begin = end;
  }
  return rs;
}

void write_errors_csv(const std::filesystem::path& path, const TrajectoryLog& log,
                      const std::vector<TrackSample>& series) {
  auto out = csv::open_for_write(path);
  out << "t,leg,east,north,cross_track\n";
  for (const auto& s : series) {
    out << csv::num(log[s.record].t, 10) << ',' << s.leg << ',' << csv::num(s.pos.x(), 10) << ','
        << csv::num(s.pos.y(), 10) << ',' << csv::num(s.error, 10) << '\n';
  }
}

const char* to_string(Controller c) { return c == Controller::baseline ? "baseline" : "augmented"; }

namespace {

const std::vector<std::string> kColumns{"Perpendicular",     "Parallel With",        "Parallel Against",
                                        "L-R Diagonal With", "L-R Diagonal Against", "R-L Diagonal With",
                                        "R-L Diagonal Against"};

// orientation -> column; 90 and 270 share the perpendicular column
int column_of(int orientation) {
  switch (orientation) {
    case 90:
    case 270: return 0;
    case 0: return 1;
    case 180: return 2;
    case 45: return 3;
    case 135: return 4;
    case 315: return 5;
    case 225: return 6;
    default: return -1;
  }
}

std::string fmt(const char* f, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const char* kRowNames[2] = {"WP navigator (PID)", "Augmented WP navigator"};

}  // namespace

ComparisonTable table_report(const std::vector<SuiteCell>& cells) {
  const SuiteCell* grid[2][8] = {};
  for (const auto& c : cells) {
    const auto* it = std::find(std::begin(kOrientations), std::end(kOrientations), c.orientation);
    if (it == std::end(kOrientations)) {
      throw ReportError("table_report: unexpected orientation " + std::to_string(c.orientation));
    }
    grid[static_cast<int>(c.controller)][it - std::begin(kOrientations)] = &c;
  }
  std::string missing;
  for (int k = 0; k < 2; ++k) {
    for (int o = 0; o < 8; ++o) {
      if (!grid[k][o]) {
        missing += std::string(missing.empty() ? "" : ", ") + to_string(static_cast<Controller>(k)) + "@" +
                   std::to_string(kOrientations[o]);
      }
    }
  }
  if (!missing.empty()) throw ReportError("table_report: missing runs: " + missing);

  ComparisonTable t;
  t.columns = kColumns;
  int count[2][7] = {};
  for (int k = 0; k < 2; ++k) {
    for (int c = 0; c < 7; ++c) t.complete[k][c] = true;
    for (int o = 0; o < 8; ++o) {
      const SuiteCell& cell = *grid[k][o];
      const int col = column_of(kOrientations[o]);
      t.max_error[k][col] += cell.report.max_error;
      t.pct_over_1m[k][col] += cell.report.pct_over_1m;
      t.complete[k][col] = t.complete[k][col] && cell.complete;
      ++count[k][col];
    }
    for (int c = 0; c < 7; ++c) {
      t.max_error[k][c] /= count[k][c];
      t.pct_over_1m[k][c] /= count[k][c];
    }
  }
  return t;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream os;
  os << "# cross-track error per leg orientation relative to the current; pct_over_1m is arc-length weighted; "
        "perpendicular is the mean of two opposing traversals; * marks an incomplete run\n";
  os << "controller,metric";
  for (const auto& c : columns) os << ',' << c;
  os << '\n';
  for (int k = 0; k < 2; ++k) {
    os << to_string(static_cast<Controller>(k)) << ",max_error_m";
    for (int c = 0; c < 7; ++c) os << ',' << fmt("%.2f", max_error[k][c]) << (complete[k][c] ? "" : "*");
    os << '\n' << to_string(static_cast<Controller>(k)) << ",pct_over_1m";
    for (int c = 0; c < 7; ++c) os << ',' << fmt("%.1f", pct_over_1m[k][c]) << (complete[k][c] ? "" : "*");
    os << '\n';
  }
  return os.str();
}

std::string ComparisonTable::to_text() const {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"", ""};
  head.insert(head.end(), columns.begin(), columns.end());
  rows.push_back(head);
  for (int k = 0; k < 2; ++k) {
    std::vector<std::string> a{kRowNames[k], "Max error"};
    std::vector<std::string> b{"", "% path error > 1 m"};
    for (int c = 0; c < 7; ++c) {
      const char* mark = complete[k][c] ? "" : "*";
      a.push_back(fmt("%.2f m", max_error[k][c]) + mark);
      b.push_back(fmt("%.1f %%", pct_over_1m[k][c]) + mark);
    }
    rows.push_back(a);
    rows.push_back(b);
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream os;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << " | ";
      if (i < 2) {
        os << r[i] << std::string(width[i] - r[i].size(), ' ');
      } else {
        os << std::string(width[i] - r[i].size(), ' ') << r[i];
      }
    }
    os << '\n';
  }
  bool any_incomplete = false;
  for (int k = 0; k < 2; ++k) {
    for (int c = 0; c < 7; ++c) any_incomplete = any_incomplete || !complete[k][c];
  }
  if (any_incomplete) os << "* includes a run that hit the duration limit\n";
  return os.str();
}

}  // namespace ffnav
