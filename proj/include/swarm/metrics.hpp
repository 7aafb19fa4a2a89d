#pragma once

#include <optional>
#include <span>

#include "swarm/environment.hpp"
#include "swarm/model.hpp"
#include "swarm/simulator.hpp"

namespace swarm {

/// Speeds below this contribute zero to every pair of the order metric.
inline constexpr double kOrderSpeedFloor = 1e-9;

/// Mean pairwise cosine similarity of velocities, in [-1, 1]. Undefined for
/// fewer than two robots.
template <typename Scalar>
std::optional<Scalar> order_metric(std::span<const Vector3<Scalar>> velocities) {
  const std::size_t n = velocities.size();
  if (n < 2) {
    return std::nullopt;
  }
  Scalar sum = Scalar(0);
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar ni = velocities[i].norm();
    if (ni < Scalar(kOrderSpeedFloor)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Scalar nj = velocities[j].norm();
      if (nj < Scalar(kOrderSpeedFloor)) continue;
      sum += velocities[i].dot(velocities[j]) / (ni * nj);
    }
  }
  return sum / static_cast<Scalar>(n * (n - 1));
}

/// Formation error is only scored after this much simulated time.
inline constexpr double kFormationSettleSeconds = 2.0;

struct RunMetrics {
  bool success = false;
  double mean_order = 0.0;
  double mean_speed = 0.0;
  std::optional<double> travel_time;  // successful runs only
  double mean_energy = 0.0;           // (1/n) sum_i sum_k |u_i(k)|^2 tau
  double max_formation_error = 0.0;
  double min_interrobot_distance = 0.0;
  double min_obstacle_distance = 0.0;
};

/// Summary metrics for one log. Pure function of its inputs.
RunMetrics evaluate(const TrajectoryLog& log, const SwarmParams& params, const Environment& env,
                    const FormationConfig& config);

}  // namespace swarm
