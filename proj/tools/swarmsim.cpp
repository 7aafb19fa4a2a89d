// swarmsim: single runs, seeded batches and the shipped demo scenarios.
//
//   swarmsim run   --scenario FILE --seed S --out DIR
//   swarmsim batch --scenario FILE --runs K --seed S --out DIR [--jobs J]
//   swarmsim demo  --preset pentagon|vshape [--seed S] [--out DIR]
//
// Exit codes: 0 done, 1 scenario or file error, 2 bad command line.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "swarm/io.hpp"
#include "swarm/metrics.hpp"
#include "swarm/presets.hpp"
#include "swarm/simulator.hpp"

namespace fs = std::filesystem;
using namespace swarm;

namespace {

MetricsRecord run_one(const Scenario& scenario, std::uint64_t seed, const fs::path& dir) {
  fs::create_directories(dir);
  const Scenario resolved = resolve(scenario, seed);
  const TrajectoryLog log = simulate(resolved);

  MetricsRecord record;
  record.scenario_digest = log.scenario_digest;
  record.seed = seed;
  record.controller = resolved.controller;
  record.outcome = log.outcome;
  record.outcome_step = log.outcome_step;
  record.metrics = evaluate(log, resolved.params, resolved.environment, resolved.config);

  write_scenario(resolved, dir / "resolved.yaml");
  write_trajectory(log, dir / "trajectory.csv");
  write_metrics(record, dir / "metrics.txt");
  spdlog::info("seed {}: {} at step {}", seed, to_string(log.outcome), log.outcome_step);
  return record;
}

void print_summary(const MetricsRecord& r) {
  const RunMetrics& m = r.metrics;
  std::printf("outcome=%s step=%zu order=%.4f speed=%.4f energy=%.4f", to_string(r.outcome),
              r.outcome_step, m.mean_order, m.mean_speed, m.mean_energy);
  if (m.travel_time) std::printf(" travel_time=%.1f", *m.travel_time);
  std::printf("\n");
}

std::vector<MetricsRecord> run_batch(const Scenario& scenario, std::uint64_t seed,
                                     std::size_t runs, std::size_t jobs, const fs::path& out) {
  fs::create_directories(out);
  write_scenario(scenario, out / "scenario.yaml");

  std::vector<MetricsRecord> records(runs);
  std::vector<std::exception_ptr> errors(runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < runs; k = next++) {
      const std::uint64_t s = seed + k;
      try {
        records[k] = run_one(scenario, s, out / ("run_" + std::to_string(s)));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::max<std::size_t>(1, std::min(jobs, runs)); ++t) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const AggregateRow row = aggregate(scenario.config.name, to_string(scenario.controller), records);
  write_aggregate(std::span(&row, 1), out / "aggregate.csv");
  std::printf("%s\n%s,%s,%zu/%zu,%.4f,%.4f,", kAggregateHeader, row.configuration.c_str(),
              row.method.c_str(), row.successes, row.runs, row.mean_order, row.mean_speed);
  if (row.travel_time) std::printf("%.4f", *row.travel_time);
  std::printf(",%.4f\n", row.mean_energy);
  return records;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("swarmsim"));

  CLI::App app{"Multi-robot swarm simulator with event-based reconfiguration"};
  app.require_subcommand(1);
  std::string level = "info";
  app.add_option("--log-level", level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  std::string scenario_path;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string controller;
  std::size_t runs = 10;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string preset_name;

  auto* run = app.add_subcommand("run", "simulate one seed");
  run->add_option("--scenario", scenario_path, "scenario YAML file")->required();
  run->add_option("--seed", seed, "root seed for forest and placement")->capture_default_str();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--controller", controller, "override run.controller")
      ->check(CLI::IsMember({"erc", "rigid_baseline"}));

  auto* batch = app.add_subcommand("batch", "simulate seeds seed..seed+runs-1");
  batch->add_option("--scenario", scenario_path, "scenario YAML file")->required();
  batch->add_option("--runs", runs, "number of seeds")->capture_default_str()->check(
      CLI::PositiveNumber);
  batch->add_option("--seed", seed, "first seed")->capture_default_str();
  batch->add_option("--out", out_dir, "output directory")->required();
  batch->add_option("--jobs", jobs, "concurrent runs")->capture_default_str()->check(
      CLI::PositiveNumber);
  batch->add_option("--controller", controller, "override run.controller")
      ->check(CLI::IsMember({"erc", "rigid_baseline"}));

  auto* demo = app.add_subcommand("demo", "run a shipped corridor scenario");
  demo->add_option("--preset", preset_name, "pentagon or vshape")
      ->required()
      ->check(CLI::IsMember({"pentagon", "vshape"}));
  demo->add_option("--seed", seed, "root seed")->capture_default_str();
  demo->add_option("--out", out_dir, "output directory (default demo-<preset>)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  spdlog::set_level(spdlog::level::from_str(level));

  try {
    if (*demo) {
      const Scenario scenario = preset(preset_name);
      const fs::path dir = out_dir.empty() ? "demo-" + preset_name : out_dir;
      fs::create_directories(dir);
      write_scenario(scenario, dir / "scenario.yaml");
      print_summary(run_one(scenario, seed, dir));
      return 0;
    }

    Scenario scenario = parse_scenario(scenario_path);
    if (!controller.empty()) scenario.controller = controller_from_string(controller);
    if (*run) {
      print_summary(run_one(scenario, seed, out_dir));
    } else {
      run_batch(scenario, seed, runs, jobs, out_dir);
    }
    return 0;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
