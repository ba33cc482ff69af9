// Command-line front end: run a scenario or sweep one parameter, write
// results.csv and report.md, optionally the per-seed event logs.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "msim/metrics.hpp"
#include "msim/runner.hpp"
#include "msim/scenario.hpp"

namespace fs = std::filesystem;
using namespace msim;

namespace {

struct Options {
  std::string scenario;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string out = "out";
  int threads = 0;
  bool assert_checks = false;
  bool compare = false;
  bool log_events = false;
  std::string param;
  std::vector<std::string> values;
};

std::string sweep_path(const std::string& p) {
  if (p == "devices") return "devices.count";
  if (p == "horizon") return "horizon_s";
  return p;
}

struct Point {
  std::string value;
  Scenario scenario;
  std::vector<Replication> reps;
  std::optional<Comparison> comparison;
};

Point run_point(const Options& o, nlohmann::json doc, const std::string& value) {
  if (!value.empty()) apply_override(doc, sweep_path(o.param) + "=" + value);
  Point p;
  p.value = value;
  p.scenario = scenario_from_json(doc);
  require_valid(p.scenario);
  const std::uint64_t seed = o.seed.value_or(p.scenario.seed);
  const int reps = o.reps.value_or(p.scenario.replications);
  p.reps = run_replications(p.scenario, seed, reps, o.threads, o.log_events);
  if (o.compare || o.assert_checks) p.comparison = compare(p.scenario, default_groups(), seed, reps, o.threads);
  return p;
}

void write_logs(const fs::path& dir, const Point& p) {
  for (const auto& r : p.reps) {
    std::string name = "events-";
    if (!p.value.empty()) name += p.value + "-";
    name += std::to_string(r.seed) + ".ndjson";
    std::ofstream f(dir / name);
    r.log->write_ndjson(f);
  }
}

int execute(const Options& o) {
  const nlohmann::json doc = load_scenario_json(o.scenario, o.sets);
  std::vector<Point> points;
  if (o.param.empty()) {
    points.push_back(run_point(o, doc, ""));
  } else {
    for (const auto& v : o.values) points.push_back(run_point(o, doc, v));
  }

  // Overhead against the swept value, one slope per sweep.
  double slope = std::nan("");
  if (!o.param.empty()) {
    std::vector<double> x, y;
    for (const auto& p : points) {
      char* end = nullptr;
      const double v = std::strtod(p.value.c_str(), &end);
      if (end == p.value.c_str()) continue;
      x.push_back(v);
      y.push_back(axis_scores(merged_ledger(p.reps), p.scenario, static_cast<int>(p.reps.size())).overhead);
    }
    slope = least_squares_slope(x, y);
  }

  const fs::path dir(o.out);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "results.csv");
    write_csv_header(csv);
    for (const auto& p : points) {
      for (const auto& r : p.reps) {
        CsvRow row;
        row.scenario = p.scenario.id;
        row.seed = r.seed;
        row.stack = stack_label(p.scenario.strategies);
        row.sweep_param = o.param;
        row.sweep_value = p.value;
        row.log_digest = r.digest;
        row.ledger = r.ledger;
        row.axes = axis_scores(r.ledger, p.scenario, 1);
        row.axes.scalability = slope;
        write_csv_row(csv, row);
      }
    }
  }

  std::vector<StackSummary> summaries;
  for (const auto& p : points) {
    StackSummary s;
    s.label = stack_label(p.scenario.strategies);
    s.sweep_value = p.value;
    s.ledger = merged_ledger(p.reps);
    s.runs = static_cast<int>(p.reps.size());
    s.axes = axis_scores(s.ledger, p.scenario, s.runs);
    s.axes.scalability = slope;
    summaries.push_back(std::move(s));
  }

  bool checks_ok = true;
  {
    std::ofstream md(dir / "report.md");
    const Comparison* cmp = nullptr;
    for (const auto& p : points) {
      if (!p.comparison) continue;
      checks_ok = checks_ok && p.comparison->all_passed();
    }
    if (!points.empty() && points.front().comparison) cmp = &*points.front().comparison;
    write_report(md, points.front().scenario, summaries, cmp);
    if (!o.param.empty()) {
      md << "\n## Sweep of " << o.param << "\n\nScalability (slope of overhead per unit of " << o.param << "): "
         << (std::isnan(slope) ? std::string("n/a") : std::to_string(slope)) << "\n";
      for (std::size_t i = 1; i < points.size(); ++i) {
        if (!points[i].comparison) continue;
        md << "\n### Direction checks at " << o.param << " = " << points[i].value << "\n\n";
        for (const auto& c : points[i].comparison->checks)
          md << "- " << (c.passed ? "PASS" : "FAIL") << " " << c.name << " (" << c.detail << ")\n";
      }
    }
  }
  if (o.log_events)
    for (const auto& p : points) write_logs(dir, p);

  std::cout << "wrote " << (dir / "results.csv").string() << " and " << (dir / "report.md").string() << '\n';
  for (const auto& p : points) {
    if (!p.comparison) continue;
    for (const auto& c : p.comparison->checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << (p.value.empty() ? "" : o.param + "=" + p.value + " ")
                << c.name << " (" << c.detail << ")\n";
  }
  return o.assert_checks && !checks_ok ? 1 : 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("scenario", o.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", o.sets, "Override a scenario field, key.path=value (repeatable)");
  cmd->add_option("--seed", o.seed, "First seed (default: the scenario's)");
  cmd->add_option("--reps", o.reps, "Replications (default: the scenario's)")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads, 0 for all cores")->capture_default_str();
  cmd->add_flag("--compare", o.compare, "Also run the RAN-based vs CN-based comparison");
  cmd->add_flag("--assert", o.assert_checks, "Exit 1 if a direction check fails (implies --compare)");
  cmd->add_flag("--log-events", o.log_events, "Write events-<seed>.ndjson per replication");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-SIM coordination simulator"};
  app.require_subcommand(1);
  Options o;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario");
  add_common(run_cmd, o);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a scenario once per value of one parameter");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--param", o.param, "Scenario field to vary, e.g. devices or devices.num_rx")->required();
  sweep_cmd->add_option("--values", o.values, "Comma-separated values")->required()->delimiter(',');
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario file and list every violation");
  validate_cmd->add_option("scenario", o.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--set", o.sets, "Override a scenario field (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) {
      const Scenario s = scenario_from_json(load_scenario_json(o.scenario, o.sets));
      const auto problems = validate(s);
      for (const auto& p : problems) std::cout << p << '\n';
      if (problems.empty()) std::cout << "valid\n";
      return problems.empty() ? 0 : 2;
    }
    return execute(o);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
