#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "swarm/environment.hpp"
#include "swarm/erc.hpp"
#include "swarm/model.hpp"

namespace swarm {

/// Rejection-sampled start positions inside `region`.
struct RandomPlacement {
  Box region{Vec3(0, -2.5, 0), Vec3(4, 2.5, 0)};
};

using PlacementSpec = std::variant<std::vector<Vec3>, RandomPlacement>;

struct Scenario {
  SwarmParams params;
  FormationConfig config;
  Environment environment;
  std::optional<ForestSpec> forest;  // expanded per seed into extra obstacles
  PlacementSpec placement = RandomPlacement{};
  std::size_t max_steps = 1200;
  Controller controller = Controller::Erc;
};

enum class Outcome {
  Success,
  CollisionRobot,
  CollisionObstacle,
  Timeout,
};

enum class Violation {
  RobotCollision,
  ObstacleCollision,
};

struct RobotRecord {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
  Mode mode = Mode::Formation;
  double kappa = 1.0;
};

/// State of every robot at step k together with the control applied from k
/// to k+1. `order` is NaN when undefined (fewer than two robots).
struct StepRecord {
  std::size_t step = 0;
  std::vector<RobotRecord> robots;
  double order = 0.0;
};

struct TrajectoryLog {
  std::string scenario_digest;
  std::vector<StepRecord> steps;
  Outcome outcome = Outcome::Timeout;
  std::size_t outcome_step = 0;  // first violating step, goal step, or max_steps
};

/// Safety: robots closer than or at 2r collide, and a robot whose
/// exact distance to an obstacle boundary is at most r collides.
std::optional<Violation> check_safety(std::span<const RobotState> states, const Environment& env,
                                      double r);

/// Explicit positions are validated and returned verbatim. Random placement
/// samples the region keeping pairwise spacing > 3r and obstacle clearance
/// > r_a; throws ValidationError after 10^4 consecutive rejections.
std::vector<Vec3> initial_placement(const PlacementSpec& spec, const SwarmParams& params,
                                    const Environment& env, std::uint64_t seed);

/// Reorders sampled start positions so robot i gets the sample closest to
/// its formation slot (minimum total squared distance, slots centred on the
/// samples' centroid). Exhaustive for n <= 8, greedy above.
std::vector<Vec3> assign_to_slots(std::vector<Vec3> positions, const FormationConfig& config);

/// Validates the scenario and expands everything seed-dependent: the forest
/// becomes explicit obstacles and the placement becomes explicit positions.
Scenario resolve(const Scenario& scenario, std::uint64_t seed);

/// 16-hex-digit FNV-1a digest of a resolved scenario.
std::string scenario_digest(const Scenario& resolved);

struct RunOptions {
  /// Order in which robots are evaluated inside a step. Empty means 0..n-1.
  /// Any permutation must give the same log.
  std::vector<std::size_t> evaluation_order;
};

/// Synchronous simulation: each step, every robot senses and decides from
/// the same snapshot, then all robots integrate together.
TrajectoryLog simulate(const Scenario& resolved, const RunOptions& options = {});

/// resolve() followed by simulate().
TrajectoryLog run(const Scenario& scenario, std::uint64_t seed, const RunOptions& options = {});

const char* to_string(Outcome outcome);
std::optional<Outcome> outcome_from_string(const std::string& text);
const char* to_string(Controller controller);

}  // namespace swarm
