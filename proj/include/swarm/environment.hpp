#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "swarm/model.hpp"

namespace swarm {

/// Vertical cylinder through `center` (only x and y of the center matter).
struct Circle {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Axis-aligned box. When min.z == max.z the box is an infinite vertical
/// prism over its x-y footprint, which is how planar walls are expressed.
struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
};

using Obstacle = std::variant<Circle, Box>;

void validate(const Obstacle& obstacle);

/// Distance from `point` to the obstacle boundary; negative inside.
double signed_distance(const Obstacle& obstacle, const Vec3& point);

/// Closest point on the obstacle boundary to `point` (inside or out).
Vec3 closest_boundary_point(const Obstacle& obstacle, const Vec3& point);

struct Environment {
  std::vector<Obstacle> obstacles;
  Box bounds{Vec3(-5, -10, 0), Vec3(40, 10, 0)};
  double goal_line = 30.0;  // along-track coordinate, <p, u_ref>
};

/// Throws ValidationError when an obstacle is malformed or the goal line is
/// outside the arena along `u_ref`.
void validate(const Environment& env, const Vec3& u_ref);

/// Smallest boundary distance over all obstacles (+inf when there are none).
double min_obstacle_distance(const Environment& env, const Vec3& point);

/// Nearest boundary points seen by one robot, at most one per obstacle.
struct SensorScan {
  std::vector<Vec3> points;
};

/// Omnidirectional range sensor of radius `r_s`, no occlusion. Throws
/// SimulationFault(InsideObstacle) if `position` lies inside an obstacle.
SensorScan sense(const Environment& env, const Vec3& position, double r_s);

struct LateralSplit {
  std::optional<Vec3> left;
  std::optional<Vec3> right;
};

/// Nearest scan point on each side of the migration direction. A point with
/// zero lateral projection counts as right.
LateralSplit split_left_right(const SensorScan& scan, const Vec3& position,
                              const Vec3& u_ref);

/// Free width across the migration direction between the two side points.
template <typename Scalar>
Scalar estimate_width(const Vector3<Scalar>& o_l, const Vector3<Scalar>& o_r,
                      const Vector3<Scalar>& u_ref) {
  return std::abs((o_r - o_l).dot(lateral_axis(u_ref)));
}

struct ForestSpec {
  Box region{Vec3(5, -5, 0), Vec3(15, 5, 0)};
  double density = 0.05;  // obstacles per m^2
  double radius_min = 0.3;
  double radius_max = 0.5;
  double min_gap = 0.0;       // boundary-to-boundary gap between trees
  double lane_depth = 0.0;    // trees closer than this along x must also be min_gap apart in y
  std::vector<Box> keepout;   // no tree may touch these
};

void validate(const ForestSpec& spec);

/// Seeded circle placement: round(density * area) trees with centers in the
/// region, rejecting overlaps with keep-out boxes and trees closer than
/// `min_gap`. If the region is too crowded, returns fewer and logs a warning.
std::vector<Obstacle> generate_forest(const ForestSpec& spec, std::uint64_t seed);

}  // namespace swarm
