#include "swarm/environment.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include <spdlog/spdlog.h>

#include "swarm/rng.hpp"

namespace swarm {

namespace {

bool planar(const Box& box) { return box.min.z() == box.max.z(); }

Vec3 horizontal(const Vec3& v) { return {v.x(), v.y(), 0.0}; }

double circle_signed_distance(const Circle& c, const Vec3& p) {
  return horizontal(p - c.center).norm() - c.radius;
}

Vec3 circle_closest(const Circle& c, const Vec3& p) {
  Vec3 radial = horizontal(p - c.center);
  const double len = radial.norm();
  if (len == 0.0) {
    radial = Vec3::UnitX();
  } else {
    radial /= len;
  }
  Vec3 q = c.center + c.radius * radial;
  q.z() = p.z();
  return q;
}

// Number of axes the box constrains: prisms ignore z.
int box_axes(const Box& b) { return planar(b) ? 2 : 3; }

double box_signed_distance(const Box& b, const Vec3& p) {
  const int axes = box_axes(b);
  bool inside = true;
  double outside_sq = 0.0;
  double depth = std::numeric_limits<double>::infinity();
  for (int a = 0; a < axes; ++a) {
    const double below = b.min[a] - p[a];
    const double above = p[a] - b.max[a];
    if (below > 0) {
      inside = false;
      outside_sq += below * below;
    } else if (above > 0) {
      inside = false;
      outside_sq += above * above;
    } else {
      depth = std::min({depth, -below, -above});
    }
  }
  return inside ? -depth : std::sqrt(outside_sq);
}

Vec3 box_closest(const Box& b, const Vec3& p) {
  const int axes = box_axes(b);
  Vec3 q = p;
  bool inside = true;
  for (int a = 0; a < axes; ++a) {
    if (p[a] < b.min[a] || p[a] > b.max[a]) inside = false;
    q[a] = std::clamp(p[a], b.min[a], b.max[a]);
  }
  if (!inside) {
    return q;
  }
  // Inside (or on the boundary): project onto the nearest face.
  int best_axis = 0;
  double best_value = b.min[0];
  double best_dist = std::numeric_limits<double>::infinity();
  for (int a = 0; a < axes; ++a) {
    const double to_min = p[a] - b.min[a];
    const double to_max = b.max[a] - p[a];
    if (to_min < best_dist) {
      best_dist = to_min;
      best_axis = a;
      best_value = b.min[a];
    }
    if (to_max < best_dist) {
      best_dist = to_max;
      best_axis = a;
      best_value = b.max[a];
    }
  }
  q = p;
  q[best_axis] = best_value;
  return q;
}

double along(const Vec3& p, const Vec3& u_ref) { return p.dot(u_ref); }

}  // namespace

void validate(const Obstacle& obstacle) {
  if (const auto* c = std::get_if<Circle>(&obstacle)) {
    if (!c->center.allFinite() || !(std::isfinite(c->radius) && c->radius > 0)) {
      throw ValidationError("obstacle: circle needs a finite center and radius > 0");
    }
    return;
  }
  const auto& b = std::get<Box>(obstacle);
  if (!b.min.allFinite() || !b.max.allFinite()) {
    throw ValidationError("obstacle: box corners must be finite");
  }
  if (!(b.min.x() < b.max.x() && b.min.y() < b.max.y() && b.min.z() <= b.max.z())) {
    throw ValidationError("obstacle: box min corner must be below max corner");
  }
}

double signed_distance(const Obstacle& obstacle, const Vec3& point) {
  return std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return circle_signed_distance(shape, point);
        } else {
          return box_signed_distance(shape, point);
        }
      },
      obstacle);
}

Vec3 closest_boundary_point(const Obstacle& obstacle, const Vec3& point) {
  return std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return circle_closest(shape, point);
        } else {
          return box_closest(shape, point);
        }
      },
      obstacle);
}

void validate(const Environment& env, const Vec3& u_ref) {
  for (const auto& obstacle : env.obstacles) validate(obstacle);
  const Box& b = env.bounds;
  if (!(b.min.x() < b.max.x() && b.min.y() < b.max.y())) {
    throw ValidationError("environment.bounds: min corner must be below max corner");
  }
  const std::array<Vec3, 4> corners{Vec3(b.min.x(), b.min.y(), 0), Vec3(b.max.x(), b.min.y(), 0),
                                    Vec3(b.min.x(), b.max.y(), 0), Vec3(b.max.x(), b.max.y(), 0)};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : corners) {
    lo = std::min(lo, along(c, u_ref));
    hi = std::max(hi, along(c, u_ref));
  }
  if (!(std::isfinite(env.goal_line) && env.goal_line > lo && env.goal_line < hi)) {
    throw ValidationError("environment.goal_line: must lie inside the arena bounds");
  }
}

double min_obstacle_distance(const Environment& env, const Vec3& point) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& obstacle : env.obstacles) {
    best = std::min(best, signed_distance(obstacle, point));
  }
  return best;
}

SensorScan sense(const Environment& env, const Vec3& position, double r_s) {
  SensorScan scan;
  for (const auto& obstacle : env.obstacles) {
    const double dist = signed_distance(obstacle, position);
    if (dist < 0) {
      throw SimulationFault(FaultKind::InsideObstacle, "sense: robot is inside an obstacle");
    }
    if (dist <= r_s) {
      scan.points.push_back(closest_boundary_point(obstacle, position));
    }
  }
  return scan;
}

LateralSplit split_left_right(const SensorScan& scan, const Vec3& position,
                              const Vec3& u_ref) {
  const Vec3 side = lateral_axis(u_ref);
  LateralSplit out;
  double best_left = std::numeric_limits<double>::infinity();
  double best_right = best_left;
  for (const auto& point : scan.points) {
    const Vec3 rel = point - position;
    const double dist = rel.norm();
    if (rel.dot(side) > 0) {
      if (dist < best_left) {
        best_left = dist;
        out.left = point;
      }
    } else if (dist < best_right) {
      best_right = dist;
      out.right = point;
    }
  }
  return out;
}

void validate(const ForestSpec& spec) {
  const Box& b = spec.region;
  if (!b.min.allFinite() || !b.max.allFinite() ||
      !(b.min.x() < b.max.x() && b.min.y() < b.max.y())) {
    throw ValidationError("environment.forest.region: must be a nonempty rectangle");
  }
  if (!(std::isfinite(spec.density) && spec.density >= 0)) {
    throw ValidationError("environment.forest.density: must be >= 0");
  }
  if (!(spec.radius_min > 0 && spec.radius_min <= spec.radius_max &&
        std::isfinite(spec.radius_max))) {
    throw ValidationError("environment.forest.radius: need 0 < min <= max");
  }
  if (!(std::isfinite(spec.min_gap) && spec.min_gap >= 0)) {
    throw ValidationError("environment.forest.min_gap: must be >= 0");
  }
  if (!(std::isfinite(spec.lane_depth) && spec.lane_depth >= 0)) {
    throw ValidationError("environment.forest.lane_depth: must be >= 0");
  }
}

std::vector<Obstacle> generate_forest(const ForestSpec& spec, std::uint64_t seed) {
  validate(spec);
  const Box& region = spec.region;
  const double area = (region.max.x() - region.min.x()) * (region.max.y() - region.min.y());
  const auto count = static_cast<std::size_t>(std::llround(spec.density * area));

  constexpr int kAttemptsPerTree = 1000;
  CounterRng rng(seed, rng_stream::kForest);
  std::vector<Circle> trees;
  trees.reserve(count);
  while (trees.size() < count) {
    bool placed = false;
    for (int attempt = 0; attempt < kAttemptsPerTree && !placed; ++attempt) {
      Circle c;
      c.radius = rng.uniform(spec.radius_min, spec.radius_max);
      c.center = Vec3(rng.uniform(region.min.x(), region.max.x()),
                      rng.uniform(region.min.y(), region.max.y()), 0.0);
      const bool blocked = std::any_of(spec.keepout.begin(), spec.keepout.end(),
                                       [&](const Box& box) {
                                         return box_signed_distance(box, c.center) <= c.radius;
                                       });
      if (blocked) continue;
      const bool crowded = std::any_of(trees.begin(), trees.end(), [&](const Circle& other) {
        const Vec3 d = c.center - other.center;
        const double reach = c.radius + other.radius;
        if (d.norm() - reach < spec.min_gap) return true;
        return std::abs(d.x()) < spec.lane_depth && std::abs(d.y()) - reach < spec.min_gap;
      });
      if (crowded) continue;
      trees.push_back(c);
      placed = true;
    }
    if (!placed) {
      spdlog::warn("generate_forest: placed {} of {} trees, region too crowded",
                   trees.size(), count);
      break;
    }
  }
  return {trees.begin(), trees.end()};
}

}  // namespace swarm
