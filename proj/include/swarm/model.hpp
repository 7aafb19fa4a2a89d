#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "swarm/errors.hpp"

namespace swarm {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
using Vec3 = Vector3<double>;

template <typename Scalar>
struct BasicRobotState {
  Vector3<Scalar> position = Vector3<Scalar>::Zero();
  Vector3<Scalar> velocity = Vector3<Scalar>::Zero();
};
using RobotState = BasicRobotState<double>;

/// Returns `vec` unchanged when its norm is within `bound`, otherwise the
/// same direction rescaled to norm `bound`. The zero vector maps to zero.
template <typename Derived>
typename Derived::PlainObject clamp_norm(const Eigen::MatrixBase<Derived>& vec,
                                         typename Derived::Scalar bound) {
  using Scalar = typename Derived::Scalar;
  if (!(bound >= Scalar(0))) {
    throw ValidationError("clamp_norm: bound must be nonnegative");
  }
  const Scalar norm = vec.norm();
  if (norm <= bound) {
    return vec;
  }
  return vec * (bound / norm);
}

/// One step of the discrete double integrator
///   p' = p + tau v,  v' = v + tau u.
/// Velocity saturation is the caller's job.
template <typename Scalar>
BasicRobotState<Scalar> step_dynamics(const BasicRobotState<Scalar>& state,
                                      const Vector3<Scalar>& accel, Scalar tau) {
  if (!(tau > Scalar(0)) || !std::isfinite(tau)) {
    throw ValidationError("step_dynamics: tau must be positive and finite");
  }
  if (!accel.allFinite() || !state.position.allFinite() ||
      !state.velocity.allFinite()) {
    throw ValidationError("step_dynamics: non-finite state or input");
  }
  return {state.position + tau * state.velocity, state.velocity + tau * accel};
}

/// Horizontal unit vector pointing left of `u_ref` (+90 degrees about z).
template <typename Derived>
typename Derived::PlainObject lateral_axis(const Eigen::MatrixBase<Derived>& u_ref) {
  using Plain = typename Derived::PlainObject;
  Plain perp(-u_ref.y(), u_ref.x(), 0);
  return perp / perp.norm();
}

struct SwarmParams {
  std::size_t n = 5;
  double r = 0.3;
  double r_s = 3.0;
  double r_a = 0.9;
  double v_max = 2.0;
  double u_max = 2.0;
  double tau = 0.1;
  double k_f = 0.3;
  double k_t = 2.0;
  double k_i = 1.0;
  double k_o = 1.0;
  double v_ref = 1.0;
  Vec3 u_ref = Vec3::UnitX();
  double d_ref = 1.0;
  double lambda = 4.0;
};

/// Checks every invariant and returns a copy with `u_ref` normalized.
/// Throws ValidationError naming the offending field.
SwarmParams validated(SwarmParams params);

struct FormationConfig {
  std::string name;
  std::vector<Vec3> offsets;
};

/// Builds a config whose offsets are shifted to zero mean. Offsets whose mean
/// is already below 1e-12 of their magnitude are kept bit for bit.
FormationConfig make_formation(std::string name, std::vector<Vec3> offsets);

/// Lateral extent of the offsets across the migration direction.
template <typename Scalar>
Scalar formation_width(std::span<const Vector3<Scalar>> offsets,
                       const Vector3<Scalar>& u_ref) {
  if (offsets.size() < 2) {
    return Scalar(0);
  }
  const Vector3<Scalar> side = lateral_axis(u_ref);
  Scalar lo = offsets.front().dot(side);
  Scalar hi = lo;
  for (const auto& delta : offsets) {
    const Scalar s = delta.dot(side);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi - lo;
}

inline double formation_width(const FormationConfig& config, const Vec3& u_ref) {
  return formation_width<double>(config.offsets, u_ref);
}

// Named shape generators. Every generator lays the shape out in the frame
// (u_ref, lateral_axis(u_ref)) and returns zero-mean offsets.

/// Regular polygon with one vertex pointing along u_ref; `circumradius` in m.
FormationConfig polygon_formation(std::size_t n, double circumradius, const Vec3& u_ref);
/// Apex ahead with two trailing arms. Row k sits k * spacing to the side and
/// k * depth * spacing behind the apex; the right arm trails a further
/// `stagger` fraction, so with stagger > 0 no two robots are abreast.
FormationConfig vshape_formation(std::size_t n, double spacing, const Vec3& u_ref,
                                 double depth = 1.0, double stagger = 0.0);
/// Rows of 1, 2, 3, ... robots with `spacing` between neighbours.
FormationConfig triangle_formation(std::size_t n, double spacing, const Vec3& u_ref);
/// Column along u_ref, first robot in front.
FormationConfig line_formation(std::size_t n, double spacing, const Vec3& u_ref);

/// Dispatches on "pentagon", "polygon", "v-shape"/"vshape", "triangle", "line".
/// `depth` and `stagger` only apply to the V.
FormationConfig named_formation(const std::string& generator, std::size_t n,
                                double spacing, const Vec3& u_ref, double depth = 1.0,
                                double stagger = 0.0);

}  // namespace swarm
