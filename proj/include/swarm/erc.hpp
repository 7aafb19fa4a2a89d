#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "swarm/environment.hpp"
#include "swarm/model.hpp"

namespace swarm {

enum class Mode : std::uint8_t {
  Formation = 0,
  Tailgating = 1,
};

enum class Controller {
  Erc,
  RigidBaseline,  // event trigger disabled: always formation mode, kappa = 1
};

struct ModeDecision {
  Mode mode = Mode::Formation;
  double kappa = 1.0;
};

/// Per-robot event trigger. Uses only the robot's own scan, so it is a pure
/// function of its arguments:
///   no scan, or nothing on one side  -> formation, kappa = 1
///   w_e <= lambda r                  -> tailgating, kappa = 0
///   w_e - 2r <= w_f                  -> formation, kappa = (w_e - 2r) / w_f
///   otherwise                        -> formation, kappa = 1
/// A zero-width formation (w_f = 0) keeps kappa = 1.
ModeDecision decide_mode_and_kappa(const SensorScan& scan, const Vec3& position,
                                   const SwarmParams& params, double w_f);

struct BehaviorTerms {
  Vec3 formation = Vec3::Zero();
  Vec3 tailgating = Vec3::Zero();
  Vec3 migration = Vec3::Zero();
  Vec3 interagent = Vec3::Zero();
  Vec3 obstacle = Vec3::Zero();
};

/// Sum of the behaviors active in `mode` (unclamped).
Vec3 compute_velocity(Mode mode, const BehaviorTerms& terms);

struct ControlOutput {
  Vec3 velocity = Vec3::Zero();  // velocity reached after one step
  Vec3 accel = Vec3::Zero();
};

/// Clamps the desired velocity to v_max, differentiates against the previous
/// velocity, clamps the acceleration to u_max, and integrates back so the
/// achieved velocity respects both bounds.
ControlOutput compute_control(const Vec3& prev_velocity, const Vec3& desired_velocity,
                              const SwarmParams& params);

struct ControlDecision {
  Mode mode = Mode::Formation;
  double kappa = 1.0;
  Vec3 desired_velocity = Vec3::Zero();  // clamped to v_max
  Vec3 velocity = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
};

/// Full controller for robot `index` against the previous-step snapshot.
ControlDecision control_step(std::size_t index, std::span<const RobotState> snapshot,
                             const SensorScan& scan, const FormationConfig& config,
                             const SwarmParams& params, Controller controller = Controller::Erc);

}  // namespace swarm
