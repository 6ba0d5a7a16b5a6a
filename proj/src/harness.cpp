#include "ffnav/harness.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

#include "ffnav/csv.hpp"
#include "ffnav/errors.hpp"

namespace ffnav {

using nlohmann::json;

StartSpec default_start(const std::vector<Waypoint>& mission) {
  if (mission.empty()) throw ConfigError("default_start: empty mission");
  const double b = mission.size() > 1 ? distance_bearing(mission[0].pos, mission[1].pos).bearing : 0.0;
  const EnuVector delta = -20.0 * bearing_unit(b) + 1.0 * bearing_unit(b + 90.0);
  return {offset_point(mission[0].pos, delta), b, mission[0].spd_target};
}

StartSpec resolved_start(const Scenario& sc) { return sc.start ? *sc.start : default_start(sc.mission); }

EffectSource load_effect_source(const Scenario& sc) {
  if (sc.controller.oracle) return OracleEffectModel{sc.vehicle.wind_drag_factor};
  return EffectModel::load(sc.controller.model);
}

namespace {

AsvState initial_state(const GeoPoint& pos, double heading, double speed, const Environment& env,
                       const VehicleParams& params) {
  AsvState s;
  s.pos = pos;
  s.h_t = wrap_angle(heading);
  s.through_water_speed = speed;
  const ForceSample f{sample_current(env.current, pos, 0.0), sample_wind(env.wind, pos, 0.0)};
  const EnuVector v = speed * bearing_unit(s.h_t) + drift_velocity(f, params);
  s.spd_t = v.norm();
  s.course = bearing_of(v);
  return s;
}

std::size_t step_budget(double duration, double dt) {
  return static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
}

}  // namespace

RunResult run_scenario(const Scenario& sc) { return run_scenario(sc, load_effect_source(sc)); }

RunResult run_scenario(const Scenario& sc, const EffectSource& model) {
  sc.validate();
  const Environment env{sc.current, sc.wind, LocalFrame(sc.mission.front().pos)};
  std::mt19937_64 rng(sc.seed);
  const StartSpec st = resolved_start(sc);
  AsvState s = initial_state(st.pos, st.heading, st.speed, env, sc.vehicle);

  RunResult r;
  NavigatorState nav;
  AugmentState aug;
  const std::size_t budget = step_budget(sc.duration_limit, sc.dt);
  for (std::size_t k = 0;; ++k) {
    const ForceSample f = relative_to_absolute(sense(s, env, sc.noise, rng), s);
    const std::size_t before = sc.controller.kind == Controller::baseline ? nav.active_wp_index
                                                                          : aug.nav.active_wp_index;
    TrajectoryRecord rec;
    rec.t = s.t;
    rec.state = s;
    rec.force = f;
    bool complete = false;
    if (sc.controller.kind == Controller::baseline) {
      const auto o = navigator_step(s, sc.mission, nav, sc.nav, sc.vehicle, sc.dt);
      nav = o.next;
      rec.cmd = o.cmd;
      rec.wp_index = nav.active_wp_index;
      complete = o.complete;
    } else {
      const auto o =
          augmented_navigator_step(s, sc.mission, aug, model, f, sc.augment, sc.nav, sc.vehicle, sc.dt);
      aug = o.next;
      rec.cmd = o.cmd;
      rec.wp_index = aug.nav.active_wp_index;
      rec.target = aug.target;
      complete = o.complete;
    }
    for (std::size_t i = before; i < rec.wp_index; ++i) r.advanced.push_back(i);
    r.log.push_back(rec);
    if (complete) {
      r.complete = true;
      break;
    }
    if (k >= budget) break;
    s = step(s, rec.cmd, env, sc.vehicle, sc.dt);
    s.t = static_cast<double>(k + 1) * sc.dt;
  }

  if (sc.mission.size() >= 2) {
    r.series = cross_track_series(r.log, sc.mission, sc.nav.acceptance_radius);
    r.score = score_run(r.series);
  }
  return r;
}

std::string run_report_csv(const RunResult& r) {
  std::ostringstream os;
  os << "# cross-track error to the active leg's infinite line; pct_over_1m is the share of scored arc length "
        "with |error| > 1 m, error linear between samples\n";
  os << "label,max_error_m,pct_over_1m,path_length_m,sign_changes,complete\n";
  auto row = [&](const ErrorReport& e) {
    os << e.label << ',' << csv::num(e.max_error, 6) << ',' << csv::num(e.pct_over_1m, 6) << ','
       << csv::num(e.path_length, 6) << ',' << e.sign_changes << ',' << (r.complete ? 1 : 0) << '\n';
  };
  for (const auto& l : r.score.legs) row(l);
  row(r.score.aggregate);
  return os.str();
}

void write_run(const std::filesystem::path& dir, const Scenario& sc, const RunResult& r) {
  std::filesystem::create_directories(dir);
  write_trajectory_csv(dir / "trajectory.csv", r.log);
  write_errors_csv(dir / "errors.csv", r.log, r.series);
  csv::open_for_write(dir / "report.csv") << run_report_csv(r);
  csv::open_for_write(dir / "resolved_scenario.json") << scenario_to_json(sc).dump(2) << '\n';
}

std::vector<Waypoint> suite_mission(const SuiteSpec& s, int orientation) {
  const double b = wrap_angle(s.current_axis_bearing + orientation);
  const GeoPoint a = offset_point(s.center, -0.5 * s.leg_length * bearing_unit(b));
  return {{a, s.speed}, {offset_point(a, s.leg_length * bearing_unit(b)), s.speed}};
}

namespace {

std::string cell_name(int orientation, Controller c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "o%03d_%s", orientation, to_string(c));
  return buf;
}

}  // namespace

Scenario suite_scenario(const SuiteSpec& s, int orientation, Controller c) {
  json j = s.scenario_template;
  json mission = json::array();
  for (const auto& w : suite_mission(s, orientation)) {
    mission.push_back({{"lat", w.pos.lat()}, {"lon", w.pos.lon()}, {"speed_mps", w.spd_target}});
  }
  j["mission"] = mission;
  j.erase("start");
  j["name"] = cell_name(orientation, c);
  j["controller"] = c == Controller::baseline ? json{{"kind", "baseline"}}
                                              : json{{"kind", "augmented"}, {"model", s.augmented_model}};
  return scenario_from_json(j, s.base_dir);
}

SuiteResult run_suite(const SuiteSpec& s, const std::filesystem::path& out) {
  s.validate();
  struct Job {
    Scenario sc;
    int orientation;
    Controller controller;
  };
  std::vector<Job> jobs;
  for (int o : s.orientations) {
    for (Controller c : {Controller::baseline, Controller::augmented}) jobs.push_back({suite_scenario(s, o, c), o, c});
  }
  const EffectSource model = load_effect_source(jobs.back().sc);

  const auto policy = s.parallel ? std::launch::async : std::launch::deferred;
  std::vector<std::future<RunResult>> futures;
  for (const auto& j : jobs) {
    futures.push_back(std::async(policy, [&j, &model] { return run_scenario(j.sc, model); }));
  }

  SuiteResult res;
  std::ostringstream cells;
  cells << "orientation,controller,max_error_m,pct_over_1m,path_length_m,sign_changes,complete\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const RunResult r = futures[i].get();
    const auto& j = jobs[i];
    SuiteCell cell{j.orientation, j.controller, r.score.aggregate, r.complete};
    cell.report.label = cell_name(j.orientation, j.controller);
    res.cells.push_back(cell);
    res.all_complete = res.all_complete && r.complete;
    cells << j.orientation << ',' << to_string(j.controller) << ',' << csv::num(cell.report.max_error, 6) << ','
          << csv::num(cell.report.pct_over_1m, 6) << ',' << csv::num(cell.report.path_length, 6) << ','
          << cell.report.sign_changes << ',' << (r.complete ? 1 : 0) << '\n';
    if (!out.empty()) {
      write_run(out / "runs" / cell.report.label, j.sc, r);
      if (j.controller == Controller::baseline) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "orientation_%03d.csv", j.orientation);
        write_mission_csv(out / "missions" / buf, j.sc.mission);
      }
    }
  }

  try {
    res.table = table_report(res.cells);
  } catch (const ReportError&) {
    if (s.orientations.size() == 8) throw;
  }
  if (!out.empty()) {
    csv::open_for_write(out / "cells.csv") << cells.str();
    csv::open_for_write(out / "resolved_suite.json") << suite_to_json(s).dump(2) << '\n';
    if (res.table) {
      csv::open_for_write(out / "table.csv") << res.table->to_csv();
      csv::open_for_write(out / "table.txt") << res.table->to_text();
    }
  }
  return res;
}

TrainingSet generate_training_logs(const SweepSpec& sweep) {
  json base = sweep.scenario_template;
  base["mission"] = json::array({{{"lat", sweep.center.lat()}, {"lon", sweep.center.lon()}, {"speed_mps", 1.0}}});
  base.erase("current");
  base.erase("wind");
  const Scenario tpl = scenario_from_json(base, sweep.base_dir);

  std::vector<bool> loops;
  if (sweep.mode != SweepMode::closed_loop) loops.push_back(false);
  if (sweep.mode != SweepMode::open_loop) loops.push_back(true);

  TrainingSet out;
  const std::size_t steps = step_budget(sweep.leg_duration, tpl.dt);
  for (bool closed : loops) {
    for (const auto& c : sweep.currents) {
      for (const auto& w : sweep.winds) {
        Environment env{FieldSpec::uniform(c.speed, c.direction), FieldSpec::uniform(w.speed, w.direction),
                        LocalFrame(sweep.center)};
        env.current.gust = c.gust;
        env.wind.gust = w.gust;
        env.current.validate();
        env.wind.validate();
        for (double h : sweep.headings) {
          for (double v : sweep.speeds) {
            if (!(v > 0.0 && v <= tpl.vehicle.max_water_speed)) throw ConfigError("sweep: speed out of range");
            std::mt19937_64 rng(tpl.seed + out.runs);
            ++out.runs;
            const std::vector<Waypoint> mission{
                {offset_point(sweep.center, 2.0 * v * sweep.leg_duration * bearing_unit(h)), v}};
            AsvState s = initial_state(sweep.center, h, v, env, tpl.vehicle);
            NavigatorState nav;
            for (std::size_t k = 0; k < steps; ++k) {
              const ForceSample f = relative_to_absolute(sense(s, env, tpl.noise, rng), s);
              ActuatorCommand cmd(v / tpl.vehicle.max_water_speed, 0.0);
              if (closed) {
                const auto o = navigator_step(s, mission, nav, tpl.nav, tpl.vehicle, tpl.dt);
                if (o.complete) break;
                nav = o.next;
                cmd = o.cmd;
              }
              AsvState n = step(s, cmd, env, tpl.vehicle, tpl.dt);
              n.t = static_cast<double>(k + 1) * tpl.dt;
              TrainingSample ts;
              ts.current = f.current().to_enu();
              ts.wind = f.wind().to_enu();
              ts.speed_cmd = v;
              ts.heading = bearing_unit(s.h_t);
              ts.drift = n.ground_velocity() - n.through_water_speed * bearing_unit(n.h_t);
              ts.deficit = -ts.drift.dot(ts.heading);
              out.samples.push_back(ts);
              s = n;
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace ffnav
