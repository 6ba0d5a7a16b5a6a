#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "ffnav/csv.hpp"
#include "ffnav/errors.hpp"
#include "ffnav/harness.hpp"

namespace fs = std::filesystem;
using namespace ffnav;

namespace {

int cmd_run(const fs::path& file, const fs::path& out, std::optional<std::uint64_t> seed) {
  Scenario sc = load_scenario(file);
  if (seed) sc.seed = *seed;
  const RunResult r = run_scenario(sc);
  write_run(out, sc, r);
  const auto& a = r.score.aggregate;
  std::printf("%s: %s, max error %.2f m, %.1f %% of path over 1 m, %d sign changes\n", sc.name.c_str(),
              r.complete ? "complete" : "INCOMPLETE (duration limit)", a.max_error, a.pct_over_1m, a.sign_changes);
  return r.complete ? 0 : 2;
}

int cmd_suite(const fs::path& file, const fs::path& out, std::optional<std::uint64_t> seed) {
  SuiteSpec s = load_suite(file);
  if (seed) s.scenario_template["seed"] = *seed;
  const SuiteResult r = run_suite(s, out);
  if (r.table) std::cout << r.table->to_text();
  for (const auto& c : r.cells) {
    if (!c.complete) std::printf("incomplete: %s\n", c.report.label.c_str());
  }
  return r.all_complete ? 0 : 2;
}

int cmd_train(const fs::path& file, const fs::path& out, std::optional<std::uint64_t> seed) {
  SweepSpec s = load_sweep(file);
  if (seed) s.scenario_template["seed"] = *seed;
  const TrainingSet t = generate_training_logs(s);
  const fs::path csv_path = out.extension() == ".csv" ? out : out / "training.csv";
  write_training_csv(csv_path, t.samples);
  std::printf("%zu runs, %zu samples -> %s\n", t.runs, t.samples.size(), csv_path.string().c_str());
  return 0;
}

int cmd_fit(const fs::path& file, const fs::path& model_path, bool intercept) {
  const EffectModel m = fit(read_training_csv(file), kRecipeEnuV1, intercept);
  m.save(model_path);
  const auto& r = m.residual_rmse();
  std::printf("fitted %zu samples, residual rmse drift_east %.3g, drift_north %.3g, deficit %.3g -> %s\n",
              m.samples(), r(0), r(1), r(2), model_path.string().c_str());
  return 0;
}

int cmd_report(const fs::path& dir) {
  if (fs::exists(dir / "resolved_suite.json")) {
    const auto t = csv::read(dir / "cells.csv");
    std::vector<SuiteCell> cells;
    for (const auto& row : t.rows) {
      SuiteCell c;
      c.orientation = static_cast<int>(csv::to_double(row[0], "cells.csv"));
      c.controller = row[1] == "baseline" ? Controller::baseline : Controller::augmented;
      c.report.max_error = csv::to_double(row[2], "cells.csv");
      c.report.pct_over_1m = csv::to_double(row[3], "cells.csv");
      c.complete = row[6] == "1";
      cells.push_back(c);
    }
    const ComparisonTable table = table_report(cells);
    csv::open_for_write(dir / "table.csv") << table.to_csv();
    csv::open_for_write(dir / "table.txt") << table.to_text();
    std::cout << table.to_text();
    return 0;
  }
  const Scenario sc = load_scenario(dir / "resolved_scenario.json");
  RunResult r;
  r.log = read_trajectory_csv(dir / "trajectory.csv");
  r.complete = !r.log.empty() && r.log.back().wp_index >= sc.mission.size();
  r.series = cross_track_series(r.log, sc.mission, sc.nav.acceptance_radius);
  r.score = score_run(r.series);
  write_errors_csv(dir / "errors.csv", r.log, r.series);
  const std::string report = run_report_csv(r);
  csv::open_for_write(dir / "report.csv") << report;
  std::cout << report;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ffnav: ASV waypoint navigation simulator with feed-forward intermediate waypoints"};
  app.require_subcommand(1);

  fs::path file;
  fs::path out = "out";
  std::optional<std::uint64_t> seed;
  bool intercept = false;

  auto* run = app.add_subcommand("run", "Simulate one scenario");
  run->add_option("scenario", file, "Scenario JSON")->required()->check(CLI::ExistingFile);
  auto* suite = app.add_subcommand("suite", "Run the eight-orientation comparison suite");
  suite->add_option("suite", file, "Suite JSON")->required()->check(CLI::ExistingFile);
  auto* train = app.add_subcommand("train", "Generate effect-model training samples from a sweep");
  train->add_option("sweep", file, "Sweep JSON")->required()->check(CLI::ExistingFile);
  for (auto* sub : {run, suite, train}) {
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Override the scenario seed");
  }
  auto* fit_cmd = app.add_subcommand("fit", "Fit an effect model from training CSV");
  fs::path model_path;
  fit_cmd->add_option("training", file, "Training CSV")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("-o,--output", model_path, "Model file")->required();
  fit_cmd->add_flag("--intercept", intercept, "Include an intercept column");
  auto* report = app.add_subcommand("report", "Rescore a run or rebuild a suite table");
  report->add_option("run_dir", file, "Run or suite output directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(file, out, seed);
    if (*suite) return cmd_suite(file, out, seed);
    if (*train) return cmd_train(file, out, seed);
    if (*fit_cmd) return cmd_fit(file, model_path, intercept);
    if (*report) return cmd_report(file);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
