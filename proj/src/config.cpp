#include <fstream>
#include <set>
#include <sstream>

#include "ffnav/csv.hpp"
#include "ffnav/errors.hpp"
#include "ffnav/harness.hpp"

namespace ffnav {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

double num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

double req(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return num(j, key, 0.0);
}

GeoPoint point_from_json(const json& j, const std::string& where) {
  only_keys(j, {"lat", "lon"}, where);
  return GeoPoint(req(j, "lat", where), req(j, "lon", where));
}

json point_to_json(const GeoPoint& p) { return {{"lat", p.lat()}, {"lon", p.lon()}}; }

PidGains pid_from_json(const json& j, const PidGains& d, const std::string& where) {
  only_keys(j, {"kp", "ki", "kd", "i_clamp"}, where);
  return {num(j, "kp", d.kp), num(j, "ki", d.ki), num(j, "kd", d.kd), num(j, "i_clamp", d.i_clamp)};
}

json pid_to_json(const PidGains& g) { return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}, {"i_clamp", g.i_clamp}}; }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::optional<Gust> gust_from_json(const json& j) {
  if (!j.contains("gust") || j.at("gust").is_null()) return std::nullopt;
  const auto& g = j.at("gust");
  only_keys(g, {"amplitude", "period"}, "gust");
  return Gust{req(g, "amplitude", "gust"), req(g, "period", "gust")};
}

}  // namespace

FieldSpec field_from_json(const json& j) {
  if (j.is_null()) return FieldSpec::calm();
  const std::string kind = j.value("kind", std::string("uniform"));
  FieldSpec f;
  if (kind == "uniform") {
    only_keys(j, {"kind", "speed", "direction", "gust"}, "uniform field");
    f.kind = UniformField{ForceVector(num(j, "speed", 0.0), num(j, "direction", 0.0))};
  } else if (kind == "river_profile") {
    only_keys(j, {"kind", "centerline", "axis_bearing", "speed", "direction", "half_width", "gust"},
              "river_profile field");
    RiverProfileField r;
    r.centerline_point = point_from_json(j.at("centerline"), "river_profile centerline");
    r.axis_bearing = req(j, "axis_bearing", "river_profile field");
    r.centerline = ForceVector(req(j, "speed", "river_profile field"), num(j, "direction", r.axis_bearing));
    r.half_width = req(j, "half_width", "river_profile field");
    f.kind = r;
  } else if (kind == "grid") {
    only_keys(j, {"kind", "lat0", "lon0", "dlat", "dlon", "rows", "cols", "nodes", "gust"}, "grid field");
    GridField g;
    g.lat0 = req(j, "lat0", "grid field");
    g.lon0 = req(j, "lon0", "grid field");
    g.dlat = req(j, "dlat", "grid field");
    g.dlon = req(j, "dlon", "grid field");
    g.rows = j.at("rows").get<std::size_t>();
    g.cols = j.at("cols").get<std::size_t>();
    for (const auto& n : j.at("nodes")) {
      const auto v = n.get<std::array<double, 2>>();
      g.nodes.emplace_back(v[0], v[1]);
    }
    f.kind = g;
  } else {
    throw ConfigError("unknown field kind '" + kind + "'");
  }
  f.gust = gust_from_json(j);
  f.validate();
  return f;
}

json field_to_json(const FieldSpec& f) {
  json j = std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UniformField>) {
          return {{"kind", "uniform"}, {"speed", k.flow.speed}, {"direction", k.flow.direction}};
        } else if constexpr (std::is_same_v<K, RiverProfileField>) {
          return {{"kind", "river_profile"},
                  {"centerline", point_to_json(k.centerline_point)},
                  {"axis_bearing", k.axis_bearing},
                  {"speed", k.centerline.speed},
                  {"direction", k.centerline.direction},
                  {"half_width", k.half_width}};
        } else {
          json nodes = json::array();
          for (const auto& n : k.nodes) nodes.push_back({n.speed, n.direction});
          return {{"kind", "grid"}, {"lat0", k.lat0}, {"lon0", k.lon0}, {"dlat", k.dlat}, {"dlon", k.dlon},
                  {"rows", k.rows}, {"cols", k.cols}, {"nodes", nodes}};
        }
      },
      f.kind);
  j["gust"] = f.gust ? json{{"amplitude", f.gust->amplitude}, {"period", f.gust->period}} : json(nullptr);
  return j;
}

std::vector<Waypoint> read_mission_csv(const std::filesystem::path& path) {
  const auto t = csv::read(path, "lat,lon,speed_mps");
  std::vector<Waypoint> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string ctx = path.string() + " row " + std::to_string(i + 1);
    out.push_back({GeoPoint(csv::to_double(t.rows[i][0], ctx), csv::to_double(t.rows[i][1], ctx)),
                   csv::to_double(t.rows[i][2], ctx)});
  }
  return out;
}

void write_mission_csv(const std::filesystem::path& path, const std::vector<Waypoint>& mission) {
  auto out = csv::open_for_write(path);
  out << "lat,lon,speed_mps\n";
  for (const auto& w : mission) {
    out << csv::num(w.pos.lat()) << ',' << csv::num(w.pos.lon()) << ',' << csv::num(w.spd_target) << '\n';
  }
}

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  only_keys(j,
            {"name", "mission", "start", "current", "wind", "vehicle", "noise", "seed", "controller", "gains",
             "augment", "dt", "duration_limit"},
            "scenario");
  Scenario sc;
  sc.name = j.value("name", sc.name);

  if (!j.contains("mission")) throw ConfigError("scenario: missing 'mission'");
  const auto& m = j.at("mission");
  if (m.is_string()) {
    sc.mission = read_mission_csv(resolve(base_dir, m.get<std::string>()));
  } else if (m.is_array()) {
    for (const auto& w : m) {
      only_keys(w, {"lat", "lon", "speed_mps"}, "mission waypoint");
      sc.mission.push_back({GeoPoint(req(w, "lat", "waypoint"), req(w, "lon", "waypoint")),
                            req(w, "speed_mps", "waypoint")});
    }
  } else {
    throw ConfigError("scenario: 'mission' must be a CSV path or a list of waypoints");
  }

  if (j.contains("start") && !j.at("start").is_null()) {
    const auto& s = j.at("start");
    only_keys(s, {"lat", "lon", "heading", "speed"}, "start");
    sc.start = StartSpec{GeoPoint(req(s, "lat", "start"), req(s, "lon", "start")), num(s, "heading", 0.0),
                         num(s, "speed", 0.0)};
  }
  if (j.contains("current")) sc.current = field_from_json(j.at("current"));
  if (j.contains("wind")) sc.wind = field_from_json(j.at("wind"));

  if (j.contains("vehicle")) {
    const auto& v = j.at("vehicle");
    only_keys(v, {"max_water_speed", "thrust_time_constant", "max_turn_rate", "wind_drag_factor"}, "vehicle");
    const VehicleParams d;
    sc.vehicle = {num(v, "max_water_speed", d.max_water_speed), num(v, "thrust_time_constant", d.thrust_time_constant),
                  num(v, "max_turn_rate", d.max_turn_rate), num(v, "wind_drag_factor", d.wind_drag_factor)};
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    only_keys(n, {"sigma_speed", "sigma_dir"}, "noise");
    sc.noise = {num(n, "sigma_speed", 0.0), num(n, "sigma_dir", 0.0)};
  }
  if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();

  if (j.contains("controller")) {
    const auto& c = j.at("controller");
    only_keys(c, {"kind", "model"}, "controller");
    const auto kind = c.value("kind", std::string("baseline"));
    if (kind == "baseline") {
      sc.controller.kind = Controller::baseline;
    } else if (kind == "augmented") {
      sc.controller.kind = Controller::augmented;
      const auto model = c.value("model", std::string("oracle"));
      sc.controller.oracle = model == "oracle";
      if (!sc.controller.oracle) sc.controller.model = resolve(base_dir, model);
    } else {
      throw ConfigError("controller: kind must be 'baseline' or 'augmented'");
    }
  }
  if (j.contains("gains")) {
    const auto& g = j.at("gains");
    only_keys(g, {"heading", "speed", "acceptance_radius"}, "gains");
    if (g.contains("heading")) sc.nav.heading = pid_from_json(g.at("heading"), sc.nav.heading, "gains.heading");
    if (g.contains("speed")) sc.nav.speed = pid_from_json(g.at("speed"), sc.nav.speed, "gains.speed");
    sc.nav.acceptance_radius = num(g, "acceptance_radius", sc.nav.acceptance_radius);
  }
  if (j.contains("augment")) {
    const auto& a = j.at("augment");
    only_keys(a, {"k", "max_offset", "update_period", "reference_speed_floor"}, "augment");
    const AugmentConfig d;
    sc.augment = {num(a, "k", d.k), num(a, "max_offset", d.max_offset), num(a, "update_period", d.update_period),
                  num(a, "reference_speed_floor", d.reference_speed_floor)};
  }
  sc.dt = num(j, "dt", sc.dt);
  sc.duration_limit = num(j, "duration_limit", sc.duration_limit);
  sc.validate();
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json mission = json::array();
  for (const auto& w : sc.mission) {
    mission.push_back({{"lat", w.pos.lat()}, {"lon", w.pos.lon()}, {"speed_mps", w.spd_target}});
  }
  const StartSpec st = resolved_start(sc);
  json controller{{"kind", to_string(sc.controller.kind)}};
  if (sc.controller.kind == Controller::augmented) {
    controller["model"] = sc.controller.oracle ? std::string("oracle") : sc.controller.model.string();
  }
  return {
      {"name", sc.name},
      {"mission", mission},
      {"start", {{"lat", st.pos.lat()}, {"lon", st.pos.lon()}, {"heading", st.heading}, {"speed", st.speed}}},
      {"current", field_to_json(sc.current)},
      {"wind", field_to_json(sc.wind)},
      {"vehicle",
       {{"max_water_speed", sc.vehicle.max_water_speed},
        {"thrust_time_constant", sc.vehicle.thrust_time_constant},
        {"max_turn_rate", sc.vehicle.max_turn_rate},
        {"wind_drag_factor", sc.vehicle.wind_drag_factor}}},
      {"noise", {{"sigma_speed", sc.noise.sigma_speed}, {"sigma_dir", sc.noise.sigma_dir}}},
      {"seed", sc.seed},
      {"controller", controller},
      {"gains",
       {{"heading", pid_to_json(sc.nav.heading)},
        {"speed", pid_to_json(sc.nav.speed)},
        {"acceptance_radius", sc.nav.acceptance_radius}}},
      {"augment",
       {{"k", sc.augment.k},
        {"max_offset", sc.augment.max_offset},
        {"update_period", sc.augment.update_period},
        {"reference_speed_floor", sc.augment.reference_speed_floor}}},
      {"dt", sc.dt},
      {"duration_limit", sc.duration_limit},
  };
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json(path), path.parent_path());
}

void Scenario::validate() const {
  if (mission.empty()) throw ConfigError("scenario: mission is empty");
  vehicle.validate();
  nav.validate();
  for (const auto& w : mission) {
    if (!(w.spd_target > 0.0 && w.spd_target <= vehicle.max_water_speed)) {
      throw ConfigError("scenario: waypoint speed must be in (0, max_water_speed]");
    }
  }
  if (!(dt > 0.0 && dt <= kMaxStep)) throw ConfigError("scenario: dt must be in (0, 0.5]");
  if (!(duration_limit > 0.0)) throw ConfigError("scenario: duration_limit must be > 0");
  if (!(noise.sigma_speed >= 0.0) || !(noise.sigma_dir >= 0.0)) throw ConfigError("scenario: noise sigmas must be >= 0");
  augment.validate(dt);
  current.validate();
  wind.validate();
  if (controller.kind == Controller::augmented && !controller.oracle && !std::filesystem::exists(controller.model)) {
    throw ConfigError("scenario: effect model file not found: " + controller.model.string());
  }
}

SuiteSpec suite_from_json(const json& j, const std::filesystem::path& base_dir) {
  only_keys(j,
            {"template", "overrides", "center", "leg_length", "speed", "current_axis_bearing", "orientations",
             "augmented_model", "parallel"},
            "suite");
  SuiteSpec s;
  s.base_dir = base_dir;
  if (!j.contains("template")) throw ConfigError("suite: missing 'template'");
  const auto& t = j.at("template");
  if (t.is_string()) {
    const auto path = resolve(base_dir, t.get<std::string>());
    s.scenario_template = read_json(path);
    s.base_dir = path.parent_path();
  } else {
    s.scenario_template = t;
  }
  if (j.contains("overrides")) s.scenario_template.merge_patch(j.at("overrides"));
  s.scenario_template.erase("mission");
  s.center = point_from_json(j.at("center"), "suite center");
  s.leg_length = num(j, "leg_length", s.leg_length);
  s.speed = num(j, "speed", s.speed);
  if (j.contains("current_axis_bearing")) {
    s.current_axis_bearing = num(j, "current_axis_bearing", 0.0);
  } else {
    const FieldSpec c = field_from_json(s.scenario_template.value("current", json(nullptr)));
    const auto* u = std::get_if<UniformField>(&c.kind);
    if (!u) throw ConfigError("suite: 'current_axis_bearing' is required for non-uniform currents");
    s.current_axis_bearing = u->flow.direction;
  }
  if (j.contains("orientations")) s.orientations = j.at("orientations").get<std::vector<int>>();
  s.augmented_model = j.value("augmented_model", s.augmented_model);
  s.parallel = j.value("parallel", s.parallel);
  s.validate();
  return s;
}

json suite_to_json(const SuiteSpec& s) {
  return {{"template", s.scenario_template},
          {"center", point_to_json(s.center)},
          {"leg_length", s.leg_length},
          {"speed", s.speed},
          {"current_axis_bearing", s.current_axis_bearing},
          {"orientations", s.orientations},
          {"augmented_model", s.augmented_model},
          {"parallel", s.parallel}};
}

SuiteSpec load_suite(const std::filesystem::path& path) { return suite_from_json(read_json(path), path.parent_path()); }

void SuiteSpec::validate() const {
  const double radius =
      scenario_template.contains("gains") ? num(scenario_template.at("gains"), "acceptance_radius", 2.0) : 2.0;
  if (!(leg_length >= 20.0 * radius)) throw ConfigError("suite: leg_length must be >= 20 x acceptance radius");
  if (!(speed > 0.0)) throw ConfigError("suite: speed must be > 0");
  if (orientations.empty()) throw ConfigError("suite: no orientations");
}

SweepSpec sweep_from_json(const json& j, const std::filesystem::path& base_dir) {
  only_keys(j, {"template", "center", "headings", "speeds", "currents", "winds", "leg_duration", "mode"}, "sweep");
  SweepSpec s;
  s.base_dir = base_dir;
  if (j.contains("template")) {
    const auto& t = j.at("template");
    s.scenario_template = t.is_string() ? read_json(resolve(base_dir, t.get<std::string>())) : t;
  } else {
    s.scenario_template = json::object();
  }
  s.scenario_template.erase("mission");
  s.center = j.contains("center") ? point_from_json(j.at("center"), "sweep center") : GeoPoint(34.0, -81.0);
  if (j.contains("headings")) s.headings = j.at("headings").get<std::vector<double>>();
  if (j.contains("speeds")) s.speeds = j.at("speeds").get<std::vector<double>>();
  auto flows = [](const json& arr, const char* what) {
    std::vector<FlowSpec> out;
    for (const auto& f : arr) {
      only_keys(f, {"speed", "direction", "gust"}, what);
      out.push_back({num(f, "speed", 0.0), num(f, "direction", 0.0), gust_from_json(f)});
    }
    return out;
  };
  if (j.contains("currents")) s.currents = flows(j.at("currents"), "sweep current");
  if (j.contains("winds")) s.winds = flows(j.at("winds"), "sweep wind");
  if (s.currents.empty()) s.currents.push_back(FlowSpec{});
  if (s.winds.empty()) s.winds.push_back(FlowSpec{});
  s.leg_duration = num(j, "leg_duration", s.leg_duration);
  const auto mode = j.value("mode", std::string("open_loop"));
  if (mode == "open_loop") {
    s.mode = SweepMode::open_loop;
  } else if (mode == "closed_loop") {
    s.mode = SweepMode::closed_loop;
  } else if (mode == "both") {
    s.mode = SweepMode::both;
  } else {
    throw ConfigError("sweep: mode must be open_loop, closed_loop or both");
  }
  if (s.headings.empty() || s.speeds.empty()) throw ConfigError("sweep: empty grid");
  if (!(s.leg_duration > 0.0)) throw ConfigError("sweep: leg_duration must be > 0");
  return s;
}

SweepSpec load_sweep(const std::filesystem::path& path) { return sweep_from_json(read_json(path), path.parent_path()); }

}  // namespace ffnav
