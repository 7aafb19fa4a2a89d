#include "swarm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swarm {

RunMetrics evaluate(const TrajectoryLog& log, const SwarmParams& params, const Environment& env,
                    const FormationConfig& config) {
  RunMetrics m;
  m.success = log.outcome == Outcome::Success;
  if (m.success) {
    m.travel_time = static_cast<double>(log.outcome_step) * params.tau;
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  m.min_interrobot_distance = kInf;
  m.min_obstacle_distance = kInf;

  double order_sum = 0.0;
  std::size_t order_count = 0;
  double speed_sum = 0.0;
  std::size_t speed_count = 0;
  double energy = 0.0;
  std::size_t n = 0;

  for (const StepRecord& step : log.steps) {
    if (step.step > log.outcome_step) break;
    n = step.robots.size();
    if (!std::isnan(step.order)) {
      order_sum += step.order;
      ++order_count;
    }
    bool all_formation = true;
    for (std::size_t i = 0; i < n; ++i) {
      const RobotRecord& r = step.robots[i];
      speed_sum += r.velocity.norm();
      ++speed_count;
      energy += r.accel.squaredNorm() * params.tau;
      all_formation = all_formation && r.mode == Mode::Formation;
      for (std::size_t j = i + 1; j < n; ++j) {
        m.min_interrobot_distance =
            std::min(m.min_interrobot_distance, (r.position - step.robots[j].position).norm());
      }
      m.min_obstacle_distance =
          std::min(m.min_obstacle_distance, min_obstacle_distance(env, r.position));
    }

    const double t = static_cast<double>(step.step) * params.tau;
    if (all_formation && t >= kFormationSettleSeconds && config.offsets.size() == n && n > 0) {
      std::vector<Vec3> anchors(n);
      Vec3 centroid = Vec3::Zero();
      for (std::size_t i = 0; i < n; ++i) {
        anchors[i] = step.robots[i].position - step.robots[i].kappa * config.offsets[i];
        centroid += anchors[i];
      }
      centroid /= static_cast<double>(n);
      for (const auto& a : anchors) {
        m.max_formation_error = std::max(m.max_formation_error, (a - centroid).norm());
      }
    }
  }

  m.mean_order = order_count > 0 ? order_sum / static_cast<double>(order_count) : 0.0;
  m.mean_speed = speed_count > 0 ? speed_sum / static_cast<double>(speed_count) : 0.0;
  m.mean_energy = n > 0 ? energy / static_cast<double>(n) : 0.0;
  return m;
}

}  // namespace swarm
