#include "swarm/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <limits>
#include <numeric>

#include "swarm/metrics.hpp"
#include "swarm/rng.hpp"

namespace swarm {

namespace {

constexpr int kMaxConsecutiveRejections = 10000;

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < size; ++k) {
      hash_ ^= p[k];
      hash_ *= 0x100000001B3ULL;
    }
  }
  void number(double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    bytes(&bits, sizeof bits);
  }
  void number(std::uint64_t x) { bytes(&x, sizeof x); }
  void vec(const Vec3& v) {
    for (int a = 0; a < 3; ++a) number(v[a]);
  }
  void text(const std::string& s) {
    number(static_cast<std::uint64_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

std::vector<RobotState> to_states(const std::vector<Vec3>& positions) {
  std::vector<RobotState> states(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) states[i].position = positions[i];
  return states;
}

void validate_positions(const std::vector<Vec3>& positions, const SwarmParams& params,
                        const Environment& env) {
  if (positions.size() != params.n) {
    throw ValidationError("placement.positions: expected " + std::to_string(params.n) +
                          " positions, got " + std::to_string(positions.size()));
  }
  for (const auto& p : positions) {
    if (!p.allFinite()) throw ValidationError("placement.positions: non-finite position");
  }
  const auto states = to_states(positions);
  if (const auto violation = check_safety(states, env, params.r)) {
    throw ValidationError(*violation == Violation::RobotCollision
                              ? "placement.positions: robots overlap (distance <= 2r)"
                              : "placement.positions: robot overlaps an obstacle");
  }
}

}  // namespace

std::vector<Vec3> assign_to_slots(std::vector<Vec3> positions, const FormationConfig& config) {
  const std::size_t n = positions.size();
  if (n != config.offsets.size() || n < 2) {
    return positions;
  }
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : positions) centroid += p;
  centroid /= static_cast<double>(n);
  Vec3 middle = Vec3::Zero();
  for (const auto& d : config.offsets) middle += d;
  middle /= static_cast<double>(n);

  auto cost = [&](std::size_t robot, std::size_t sample) {
    return (positions[sample] - centroid - (config.offsets[robot] - middle)).squaredNorm();
  };

  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  if (n <= 8) {
    // Exhaustive: at most 8! = 40320 permutations.
    std::vector<std::size_t> perm = pick;
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += cost(i, perm[i]);
      if (total < best) {
        best = total;
        pick = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Greedy: each robot in turn takes its cheapest free sample.
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best_sample = n;
      for (std::size_t s = 0; s < n; ++s) {
        if (!used[s] && (best_sample == n || cost(i, s) < cost(i, best_sample))) best_sample = s;
      }
      used[best_sample] = true;
      pick[i] = best_sample;
    }
  }
  std::vector<Vec3> assigned(n);
  for (std::size_t i = 0; i < n; ++i) assigned[i] = positions[pick[i]];
  return assigned;
}

std::optional<Violation> check_safety(std::span<const RobotState> states, const Environment& env,
                                      double r) {
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if ((states[i].position - states[j].position).norm() <= 2.0 * r) {
        return Violation::RobotCollision;
      }
    }
  }
  for (const auto& s : states) {
    if (min_obstacle_distance(env, s.position) <= r) {
      return Violation::ObstacleCollision;
    }
  }
  return std::nullopt;
}

std::vector<Vec3> initial_placement(const PlacementSpec& spec, const SwarmParams& params,
                                    const Environment& env, std::uint64_t seed) {
  if (const auto* explicit_positions = std::get_if<std::vector<Vec3>>(&spec)) {
    validate_positions(*explicit_positions, params, env);
    return *explicit_positions;
  }
  const Box& region = std::get<RandomPlacement>(spec).region;
  if (!(region.min.x() <= region.max.x() && region.min.y() <= region.max.y())) {
    throw ValidationError("placement.random: empty start region");
  }
  CounterRng rng(seed, rng_stream::kPlacement);
  std::vector<Vec3> positions;
  positions.reserve(params.n);
  int rejections = 0;
  while (positions.size() < params.n) {
    const Vec3 candidate(rng.uniform(region.min.x(), region.max.x()),
                         rng.uniform(region.min.y(), region.max.y()), region.min.z());
    const bool spaced = std::all_of(positions.begin(), positions.end(), [&](const Vec3& p) {
      return (p - candidate).norm() > 3.0 * params.r;
    });
    if (spaced && min_obstacle_distance(env, candidate) > params.r_a) {
      positions.push_back(candidate);
      rejections = 0;
    } else if (++rejections >= kMaxConsecutiveRejections) {
      throw ValidationError("placement.random: start region cannot fit " +
                            std::to_string(params.n) + " robots at spacing > 3r");
    }
  }
  return positions;
}

Scenario resolve(const Scenario& scenario, std::uint64_t seed) {
  Scenario out = scenario;
  out.params = validated(scenario.params);
  if (out.config.offsets.size() != out.params.n) {
    throw ValidationError("formation: " + std::to_string(out.config.offsets.size()) +
                          " offsets for " + std::to_string(out.params.n) + " robots");
  }
  out.config = make_formation(out.config.name, out.config.offsets);
  validate(out.environment, out.params.u_ref);
  if (out.max_steps == 0) {
    throw ValidationError("run.max_steps: must be > 0");
  }
  if (out.forest) {
    auto trees = generate_forest(*out.forest, seed);
    out.environment.obstacles.insert(out.environment.obstacles.end(), trees.begin(), trees.end());
    out.forest.reset();
  }
  auto positions = initial_placement(scenario.placement, out.params, out.environment, seed);
  if (std::holds_alternative<RandomPlacement>(scenario.placement)) {
    positions = assign_to_slots(std::move(positions), out.config);
  }
  out.placement = std::move(positions);
  return out;
}

std::string scenario_digest(const Scenario& resolved) {
  Fnv1a h;
  const SwarmParams& p = resolved.params;
  h.number(static_cast<std::uint64_t>(p.n));
  for (double x : {p.r, p.r_s, p.r_a, p.v_max, p.u_max, p.tau, p.k_f, p.k_t, p.k_i, p.k_o,
                   p.v_ref, p.d_ref, p.lambda}) {
    h.number(x);
  }
  h.vec(p.u_ref);
  h.text(resolved.config.name);
  for (const auto& d : resolved.config.offsets) h.vec(d);
  const Environment& env = resolved.environment;
  h.vec(env.bounds.min);
  h.vec(env.bounds.max);
  h.number(env.goal_line);
  for (const auto& obstacle : env.obstacles) {
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
      h.number(std::uint64_t{1});
      h.vec(c->center);
      h.number(c->radius);
    } else {
      const auto& b = std::get<Box>(obstacle);
      h.number(std::uint64_t{2});
      h.vec(b.min);
      h.vec(b.max);
    }
  }
  if (const auto* positions = std::get_if<std::vector<Vec3>>(&resolved.placement)) {
    for (const auto& q : *positions) h.vec(q);
  }
  h.number(static_cast<std::uint64_t>(resolved.max_steps));
  h.number(static_cast<std::uint64_t>(resolved.controller));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

TrajectoryLog simulate(const Scenario& resolved, const RunOptions& options) {
  const SwarmParams params = validated(resolved.params);
  const auto* positions = std::get_if<std::vector<Vec3>>(&resolved.placement);
  if (positions == nullptr) {
    throw ValidationError("simulate: scenario placement is not resolved");
  }
  if (resolved.forest) {
    throw ValidationError("simulate: scenario forest is not resolved");
  }
  validate_positions(*positions, params, resolved.environment);
  const Environment& env = resolved.environment;

  std::vector<std::size_t> order = options.evaluation_order;
  if (order.empty()) {
    order.resize(params.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      if (sorted.size() != params.n || sorted[k] != k) {
        throw ValidationError("simulate: evaluation_order must be a permutation of robot ids");
      }
    }
  }

  TrajectoryLog log;
  log.scenario_digest = scenario_digest(resolved);
  std::vector<RobotState> states = to_states(*positions);
  std::vector<ControlDecision> decisions(params.n);
  std::vector<Vec3> velocities(params.n);

  for (std::size_t k = 0;; ++k) {
    std::optional<Outcome> terminal;
    if (const auto violation = check_safety(states, env, params.r)) {
      terminal = *violation == Violation::RobotCollision ? Outcome::CollisionRobot
                                                         : Outcome::CollisionObstacle;
    } else {
      try {
        for (const std::size_t i : order) {
          const SensorScan scan = sense(env, states[i].position, params.r_s);
          decisions[i] = control_step(i, states, scan, resolved.config, params, resolved.controller);
        }
      } catch (const SimulationFault& fault) {
        terminal = fault.kind() == FaultKind::CoincidentRobots ? Outcome::CollisionRobot
                                                               : Outcome::CollisionObstacle;
      }
      if (!terminal) {
        const bool arrived = std::all_of(states.begin(), states.end(), [&](const RobotState& s) {
          return s.position.dot(params.u_ref) > env.goal_line;
        });
        if (arrived) {
          terminal = Outcome::Success;
        } else if (k >= resolved.max_steps) {
          terminal = Outcome::Timeout;
        }
      }
    }

    StepRecord record;
    record.step = k;
    record.robots.resize(params.n);
    for (std::size_t i = 0; i < params.n; ++i) {
      RobotRecord& rr = record.robots[i];
      rr.position = states[i].position;
      rr.velocity = states[i].velocity;
      rr.mode = decisions[i].mode;
      rr.kappa = decisions[i].kappa;
      // No control is applied after a terminal step.
      rr.accel = terminal ? Vec3::Zero() : decisions[i].accel;
      velocities[i] = states[i].velocity;
    }
    const auto phi = order_metric<double>(velocities);
    record.order = phi ? *phi : std::numeric_limits<double>::quiet_NaN();
    log.steps.push_back(std::move(record));

    if (terminal) {
      log.outcome = *terminal;
      log.outcome_step = k;
      break;
    }
    for (std::size_t i = 0; i < params.n; ++i) {
      states[i] = step_dynamics(states[i], decisions[i].accel, params.tau);
      states[i].velocity = clamp_norm(states[i].velocity, params.v_max);
    }
  }
  return log;
}

TrajectoryLog run(const Scenario& scenario, std::uint64_t seed, const RunOptions& options) {
  return simulate(resolve(scenario, seed), options);
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Success: return "SUCCESS";
    case Outcome::CollisionRobot: return "COLLISION_ROBOT";
    case Outcome::CollisionObstacle: return "COLLISION_OBSTACLE";
    case Outcome::Timeout: return "TIMEOUT";
  }
  return "UNKNOWN";
}

std::optional<Outcome> outcome_from_string(const std::string& text) {
  for (auto o : {Outcome::Success, Outcome::CollisionRobot, Outcome::CollisionObstacle,
                 Outcome::Timeout}) {
    if (text == to_string(o)) return o;
  }
  return std::nullopt;
}

const char* to_string(Controller controller) {
  return controller == Controller::Erc ? "erc" : "rigid_baseline";
}

}  // namespace swarm
