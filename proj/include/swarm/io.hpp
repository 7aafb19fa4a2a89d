#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarm/metrics.hpp"
#include "swarm/simulator.hpp"

namespace swarm {

// Scenario files are YAML with five top-level sections:
//
//   params:       any SwarmParams field, u_ref as [x, y] or [x, y, z]
//   formation:    name plus either `offsets: [[x, y], ...]` or
//                 `generator: pentagon|polygon|v-shape|triangle|line` with
//                 `spacing` (circumradius for polygons) and, for the V,
//                 `depth` and `stagger`
//   environment:  bounds {min, max}, obstacles (list of {circle: {center,
//                 radius}} or {box: {min, max}}), optional forest
//   placement:    `positions: [...]` or `random: {min, max}`
//   run:          max_steps, goal_line, controller (erc | rigid_baseline)
//
// Unknown keys are errors. Missing keys take the library default and log a
// notice. Errors carry "<source>:<line>: <field>: <message>".

Scenario parse_scenario_text(const std::string& text, const std::string& source = "<string>");
Scenario parse_scenario(const std::filesystem::path& path);

/// Emits a file that parses back to the same scenario, doubles at 17
/// significant digits. Formations are written as explicit offsets.
std::string dump_scenario(const Scenario& scenario);
void write_scenario(const Scenario& scenario, const std::filesystem::path& path);

// Trajectory files: one "# scenario_digest=... outcome=... outcome_step=..."
// line, the header
//   step,robot_id,px,py,pz,vx,vy,vz,ax,ay,az,mode,kappa,order
// and one row per (step, robot) sorted by step then robot id. mode is 0 for
// formation and 1 for tailgating; order is "nan" when undefined.

inline constexpr const char* kTrajectoryHeader =
    "step,robot_id,px,py,pz,vx,vy,vz,ax,ay,az,mode,kappa,order";

void write_trajectory(const TrajectoryLog& log, std::ostream& out);
void write_trajectory(const TrajectoryLog& log, const std::filesystem::path& path);
/// Throws IoError naming the offending line on malformed or unsorted rows.
TrajectoryLog read_trajectory(std::istream& in);
TrajectoryLog read_trajectory(const std::filesystem::path& path);

/// One run's key=value summary.
struct MetricsRecord {
  std::string scenario_digest;
  std::uint64_t seed = 0;
  Controller controller = Controller::Erc;
  Outcome outcome = Outcome::Timeout;
  std::size_t outcome_step = 0;
  RunMetrics metrics;
};

void write_metrics(const MetricsRecord& record, std::ostream& out);
void write_metrics(const MetricsRecord& record, const std::filesystem::path& path);
MetricsRecord read_metrics(std::istream& in);
MetricsRecord read_metrics(const std::filesystem::path& path);

/// One table row per (configuration, method). Order, speed and energy are
/// averaged over all runs, travel time over successful runs only.
struct AggregateRow {
  std::string configuration;
  std::string method;
  std::size_t successes = 0;
  std::size_t runs = 0;
  double mean_order = 0.0;
  double mean_speed = 0.0;
  std::optional<double> travel_time;
  double mean_energy = 0.0;
};

AggregateRow aggregate(const std::string& configuration, const std::string& method,
                       std::span<const MetricsRecord> records);

inline constexpr const char* kAggregateHeader =
    "configuration,method,success,order,mean_speed,travel_time,mean_energy";

void write_aggregate(std::span<const AggregateRow> rows, std::ostream& out);
void write_aggregate(std::span<const AggregateRow> rows, const std::filesystem::path& path);

Controller controller_from_string(const std::string& text);

}  // namespace swarm
