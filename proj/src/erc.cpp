#include "swarm/erc.hpp"

#include "swarm/behaviors.hpp"

namespace swarm {

ModeDecision decide_mode_and_kappa(const SensorScan& scan, const Vec3& position,
                                   const SwarmParams& params, double w_f) {
  if (scan.points.empty()) {
    return {Mode::Formation, 1.0};
  }
  const LateralSplit sides = split_left_right(scan, position, params.u_ref);
  if (!sides.left || !sides.right) {
    return {Mode::Formation, 1.0};
  }
  const double w_e = estimate_width(*sides.left, *sides.right, params.u_ref);
  if (w_e <= params.lambda * params.r) {
    return {Mode::Tailgating, 0.0};
  }
  const double clearance = w_e - 2.0 * params.r;
  if (clearance <= w_f && w_f > 0.0) {
    return {Mode::Formation, clearance / w_f};
  }
  return {Mode::Formation, 1.0};
}

Vec3 compute_velocity(Mode mode, const BehaviorTerms& terms) {
  const Vec3 shared = terms.migration + terms.interagent + terms.obstacle;
  return mode == Mode::Formation ? Vec3(terms.formation + shared)
                                 : Vec3(terms.tailgating + shared);
}

ControlOutput compute_control(const Vec3& prev_velocity, const Vec3& desired_velocity,
                              const SwarmParams& params) {
  const Vec3 target = clamp_norm(desired_velocity, params.v_max);
  const Vec3 raw_accel = (target - prev_velocity) / params.tau;
  ControlOutput out;
  out.accel = clamp_norm(raw_accel, params.u_max);
  out.velocity = clamp_norm(Vec3(prev_velocity + params.tau * out.accel), params.v_max);
  return out;
}

ControlDecision control_step(std::size_t index, std::span<const RobotState> snapshot,
                             const SensorScan& scan, const FormationConfig& config,
                             const SwarmParams& params, Controller controller) {
  const SwarmView view{snapshot, index};
  const RobotState& self = snapshot[index];

  ModeDecision decision;
  if (controller == Controller::Erc) {
    decision = decide_mode_and_kappa(scan, self.position, params,
                                     formation_width(config, params.u_ref));
  }

  BehaviorTerms terms;
  if (decision.mode == Mode::Formation) {
    terms.formation = formation_velocity<double>(view, config.offsets, decision.kappa, params.k_f);
  } else {
    terms.tailgating = tailgating_velocity<double>(view, select_leader<double>(view, params.u_ref),
                                                   params.d_ref, params.k_t, params.u_ref);
  }
  terms.migration = migration_velocity(params.v_ref, params.u_ref);
  terms.interagent = interagent_avoidance<double>(view, params.r_a, params.k_i);
  terms.obstacle = obstacle_avoidance<double>(scan.points, self.position, params.r_a, params.k_o);

  const Vec3 desired = compute_velocity(decision.mode, terms);
  const ControlOutput control = compute_control(self.velocity, desired, params);
  return {decision.mode, decision.kappa, clamp_norm(desired, params.v_max), control.velocity,
          control.accel};
}

}  // namespace swarm
