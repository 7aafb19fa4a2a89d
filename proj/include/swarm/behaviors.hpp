#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "swarm/model.hpp"

namespace swarm {

/// What robot `self` knows about the swarm: every robot's state from the
/// previous step (fully connected, zero-delay links).
template <typename Scalar>
struct BasicSwarmView {
  std::span<const BasicRobotState<Scalar>> states;
  std::size_t self = 0;

  const BasicRobotState<Scalar>& me() const { return states[self]; }
};
using SwarmView = BasicSwarmView<double>;

/// Below this leader speed the trailing direction falls back to u_ref.
inline constexpr double kLeaderSpeedEpsilon = 1e-6;

/// Consensus on p_j - kappa delta*_j:
///   k_f * sum_{j != i} (p_j - p_i - kappa (delta*_j - delta*_i)).
template <typename Scalar>
Vector3<Scalar> formation_velocity(const BasicSwarmView<Scalar>& view,
                                   std::span<const Vector3<Scalar>> offsets, Scalar kappa,
                                   Scalar k_f) {
  const auto i = view.self;
  const Vector3<Scalar> anchor_i = view.states[i].position - kappa * offsets[i];
  Vector3<Scalar> sum = Vector3<Scalar>::Zero();
  for (std::size_t j = 0; j < view.states.size(); ++j) {
    if (j == i) continue;
    sum += (view.states[j].position - kappa * offsets[j]) - anchor_i;
  }
  return k_f * sum;
}

/// Nearest robot ahead along u_ref. Robots are ranked by along-track
/// coordinate <p, u_ref>; an exact tie only qualifies robots with a lower
/// index, so every leader chain ends at a robot with no leader.
template <typename Scalar>
std::optional<std::size_t> select_leader(const BasicSwarmView<Scalar>& view,
                                         const Vector3<Scalar>& u_ref) {
  const auto i = view.self;
  const Scalar own = view.states[i].position.dot(u_ref);
  std::optional<std::size_t> leader;
  Scalar best = Scalar(0);
  for (std::size_t j = 0; j < view.states.size(); ++j) {
    if (j == i) continue;
    const Scalar s = view.states[j].position.dot(u_ref);
    const bool ahead = s > own || (s == own && j < i);
    if (ahead && (!leader || s < best)) {
      leader = j;
      best = s;
    }
  }
  return leader;
}

/// Follow the leader at distance d_ref behind it along its heading:
///   k_t (p_l - p_i - d_ref v_l/|v_l|) + v_l, or zero without a leader.
template <typename Scalar>
Vector3<Scalar> tailgating_velocity(const BasicSwarmView<Scalar>& view,
                                    std::optional<std::size_t> leader, Scalar d_ref,
                                    Scalar k_t, const Vector3<Scalar>& u_ref) {
  if (!leader) {
    return Vector3<Scalar>::Zero();
  }
  const auto& lead = view.states[*leader];
  const Scalar speed = lead.velocity.norm();
  const Vector3<Scalar> heading =
      speed < Scalar(kLeaderSpeedEpsilon) ? Vector3<Scalar>(u_ref) : Vector3<Scalar>(lead.velocity / speed);
  return k_t * (lead.position - view.me().position - d_ref * heading) + lead.velocity;
}

template <typename Scalar>
Vector3<Scalar> migration_velocity(Scalar v_ref, const Vector3<Scalar>& u_ref) {
  return v_ref * u_ref;
}

/// Repulsive potential shared by both avoidance behaviors, for a threat at
/// relative position `away` (pointing from the threat to the robot):
///   (1/d - 1/r_a) (1/d^2) away/d  when d < r_a, else zero.
template <typename Scalar>
Vector3<Scalar> repulsion(const Vector3<Scalar>& away, Scalar r_a, FaultKind on_contact) {
  const Scalar d = away.norm();
  if (d == Scalar(0)) {
    throw SimulationFault(on_contact, "avoidance: zero separation");
  }
  if (d >= r_a) {
    return Vector3<Scalar>::Zero();
  }
  return (Scalar(1) / d - Scalar(1) / r_a) / (d * d) * (away / d);
}

/// k_i * sum_j [repulsion(p_i - p_j) + v_j] over neighbours inside r_a.
template <typename Scalar>
Vector3<Scalar> interagent_avoidance(const BasicSwarmView<Scalar>& view, Scalar r_a,
                                     Scalar k_i) {
  const auto i = view.self;
  Vector3<Scalar> sum = Vector3<Scalar>::Zero();
  for (std::size_t j = 0; j < view.states.size(); ++j) {
    if (j == i) continue;
    const Vector3<Scalar> away = view.states[i].position - view.states[j].position;
    const Vector3<Scalar> push = repulsion(away, r_a, FaultKind::CoincidentRobots);
    if (away.norm() < r_a) {
      sum += push + view.states[j].velocity;
    }
  }
  return k_i * sum;
}

/// k_o * sum_o repulsion(p_i - o) over sensed obstacle points.
template <typename Scalar>
Vector3<Scalar> obstacle_avoidance(std::span<const Vector3<Scalar>> points,
                                   const Vector3<Scalar>& position, Scalar r_a, Scalar k_o) {
  Vector3<Scalar> sum = Vector3<Scalar>::Zero();
  for (const auto& o : points) {
    sum += repulsion<Scalar>(position - o, r_a, FaultKind::InsideObstacle);
  }
  return k_o * sum;
}

}  // namespace swarm
