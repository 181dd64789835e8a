#include "wsnsync/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <future>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnsync/engine.hpp"
#include "wsnsync/metrics.hpp"

namespace wsnsync {

namespace {

namespace fs = std::filesystem;

struct Scenario {
  std::string name;
  SimConfig config;
};

struct ScenarioResult {
  Scenario scenario;
  SummaryStats summary;
};

struct Flags {
  SimConfig config;
  std::string scfr = "on";
  std::string mode = "proposed";
  std::string out = "out";
};

void add_config_flags(CLI::App& cmd, Flags& f) {
  auto& c = f.config;
  cmd.add_option("--duration", c.duration, "Observation interval [s]")
      ->capture_default_str();
  cmd.add_option("--beacon-interval", c.beacon_interval,
                 "Head beacon interval / classic sync period [s]")
      ->capture_default_str();
  cmd.add_option("--measurements", c.n_measurements,
                 "Measurements per sensor")
      ->capture_default_str();
  cmd.add_option("--distance", c.distance_m, "Head-sensor distance [m]")
      ->capture_default_str();
  cmd.add_option("--skew-ppm", c.skew_ppm,
                 "Sensor frequency offset from the head [ppm]")
      ->capture_default_str();
  cmd.add_option("--offset", c.offset_s, "Sensor clock offset at t=0 [s]")
      ->capture_default_str();
  cmd.add_option("--noise-std", c.noise_sigma, "Timestamping noise std [s]")
      ->capture_default_str();
  cmd.add_option("--scfr", f.scfr, "Frequency recovery at the sensor")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  cmd.add_option("--mode", f.mode, "Synchronization protocol")
      ->check(CLI::IsMember({"proposed", "classic"}))
      ->capture_default_str();
  cmd.add_option("--seed", c.seed, "Master random seed")->capture_default_str();
  cmd.add_option("--warmup", c.warmup_s,
                 "Records before this reference time are left out of "
                 "statistics [s]")
      ->capture_default_str();
  cmd.add_option("--sensors", c.n_sensors, "Number of sensor nodes")
      ->capture_default_str();
  cmd.add_option("--out", f.out, "Output directory")->capture_default_str();
}

SimConfig resolve(const Flags& f) {
  SimConfig c = f.config;
  c.scfr_enabled = f.scfr == "on";
  c.mode = f.mode == "classic" ? ProtocolMode::kClassic
                               : ProtocolMode::kProposed;
  return c;
}

std::string interval_tag(double seconds) {
  return fmt::format("b{:g}ms", seconds * 1e3);
}

std::string scenario_name(const SimConfig& c) {
  if (c.mode == ProtocolMode::kClassic) {
    return interval_tag(c.beacon_interval) + "-classic";
  }
  return interval_tag(c.beacon_interval) +
         (c.scfr_enabled ? "-scfr-on" : "-scfr-off");
}

SummaryStats execute(const SimConfig& config, const fs::path& dir) {
  RunResult result = run(config);
  fs::create_directories(dir);
  write_records_csv(result.records, dir / "records.csv");

  std::vector<CfrTracePoint> per_sensor;
  for (std::size_t s = 0; s < config.n_sensors; ++s) {
    per_sensor.clear();
    for (const auto& p : result.cfr_trace) {
      if (p.sensor_id == s) per_sensor.push_back(p);
    }
    const auto file = s == 0 ? std::string("cfr_trace.csv")
                             : fmt::format("cfr_trace_sensor{}.csv", s);
    write_cfr_trace_csv(per_sensor, dir / file);
  }
  return compute_summary(result.records, config.warmup_s, result.counters);
}

std::string fmt_stat(const std::optional<double>& v) {
  return v ? fmt::format("{:.4e}", *v) : std::string("n/a");
}

void print_summary(std::ostream& out, const SimConfig& c,
                   const SummaryStats& s) {
  fmt::print(out, "scenario        {}\n", scenario_name(c));
  fmt::print(out, "records         {}\n", s.errors.count);
  fmt::print(out, "mean_error_s    {}\n", fmt_stat(s.errors.mean_error));
  fmt::print(out, "mean_abs_err_s  {}\n", fmt_stat(s.errors.mean_abs_error));
  fmt::print(out, "rmse_s          {}\n", fmt_stat(s.errors.rmse));
  fmt::print(out, "max_abs_err_s   {}\n", fmt_stat(s.errors.max_abs_error));
  fmt::print(out, "sensor_tx       {}\n", s.sensor_tx);
  fmt::print(out, "sensor_rx       {}\n", s.sensor_rx);
  fmt::print(out, "head_tx         {}\n", s.head_tx);
  fmt::print(out, "head_rx         {}\n", s.head_rx);
}

void print_table(std::ostream& out, const std::vector<ScenarioResult>& rows) {
  fmt::print(out, "{:<20} {:>7} {:>12} {:>12} {:>12} {:>10}\n", "scenario",
             "records", "mean_abs_s", "rmse_s", "max_abs_s", "sensor_tx");
  for (const auto& r : rows) {
    const auto& e = r.summary.errors;
    fmt::print(out, "{:<20} {:>7} {:>12} {:>12} {:>12} {:>10}\n",
               r.scenario.name, e.count, fmt_stat(e.mean_abs_error),
               fmt_stat(e.rmse), fmt_stat(e.max_abs_error),
               r.summary.sensor_tx);
  }
}

// Scenarios are independent pure runs writing to their own directories.
std::vector<ScenarioResult> execute_all(const std::vector<Scenario>& scenarios,
                                        const fs::path& root) {
  std::vector<std::future<SummaryStats>> jobs;
  jobs.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    jobs.push_back(std::async(std::launch::async, [&s, &root] {
      return execute(s.config, root / s.name);
    }));
  }
  std::vector<ScenarioResult> results;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    results.push_back({scenarios[i], jobs[i].get()});
  }
  return results;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Reverse two-way time synchronization simulator for "
               "asymmetric wireless sensor networks"};
  app.require_subcommand(1);

  Flags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  add_config_flags(*run_cmd, run_flags);

  Flags sweep_flags;
  std::vector<double> intervals{0.1, 0.01};
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Run listed beacon intervals with SCFR on and off");
  add_config_flags(*sweep_cmd, sweep_flags);
  sweep_cmd
      ->add_option("--beacon-intervals", intervals,
                   "Comma-separated beacon intervals [s]")
      ->delimiter(',')
      ->capture_default_str();

  Flags paper_flags;
  auto* paper_cmd = app.add_subcommand(
      "paper",
      "Reference matrix: {100 ms, 10 ms} x {SCFR on, off} plus classic mode");
  add_config_flags(*paper_cmd, paper_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (run_cmd->parsed()) {
      const SimConfig config = resolve(run_flags);
      config.validate();
      const auto summary = execute(config, run_flags.out);
      print_summary(out, config, summary);
      return 0;
    }

    std::vector<Scenario> scenarios;
    fs::path root;
    if (sweep_cmd->parsed()) {
      root = sweep_flags.out;
      const SimConfig base = resolve(sweep_flags);
      for (double b : intervals) {
        for (bool scfr : {true, false}) {
          SimConfig c = base;
          c.beacon_interval = b;
          c.scfr_enabled = scfr;
          scenarios.push_back({scenario_name(c), c});
        }
      }
    } else {
      root = paper_flags.out;
      const SimConfig base = resolve(paper_flags);
      for (double b : {0.1, 0.01}) {
        for (bool scfr : {true, false}) {
          SimConfig c = base;
          c.beacon_interval = b;
          c.scfr_enabled = scfr;
          c.mode = ProtocolMode::kProposed;
          scenarios.push_back({scenario_name(c), c});
        }
      }
      for (double b : {0.1, 0.01}) {
        SimConfig c = base;
        c.beacon_interval = b;
        c.scfr_enabled = false;
        c.mode = ProtocolMode::kClassic;
        scenarios.push_back({scenario_name(c), c});
      }
    }
    for (const auto& s : scenarios) s.config.validate();
    print_table(out, execute_all(scenarios, root));
    return 0;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 2;
  }
}

}  // namespace wsnsync
