#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "swarm/environment.hpp"

using namespace swarm;
using testing::Gen;

namespace {

Environment with(std::vector<Obstacle> obstacles) {
  Environment env;
  env.obstacles = std::move(obstacles);
  return env;
}

}  // namespace

TEST_CASE("sense misses a circle beyond range") {
  const Environment env = with({Circle{Vec3(5, 0, 0), 1.0}});
  CHECK(sense(env, Vec3(0, 0, 0), 3.0).points.empty());
}

TEST_CASE("sense returns the nearest boundary point") {
  const Environment env = with({Circle{Vec3(5, 0, 0), 1.0}});
  const SensorScan scan = sense(env, Vec3(3, 0, 0), 3.0);
  REQUIRE(scan.points.size() == 1);
  CHECK((scan.points[0] - Vec3(4, 0, 0)).norm() < 1e-12);
}

TEST_CASE("sense in an empty environment") {
  CHECK(sense(Environment{}, Vec3(1, 2, 0), 3.0).points.empty());
}

TEST_CASE("sense inside an obstacle is a fault") {
  const Environment env = with({Box{Vec3(0, 0, 0), Vec3(2, 2, 0)}});
  CHECK_THROWS_AS(sense(env, Vec3(1, 1, 0), 3.0), SimulationFault);
}

TEST_CASE("box distances and closest points") {
  const Obstacle wall = Box{Vec3(0, 0.5, 0), Vec3(10, 2, 0)};
  CHECK(signed_distance(wall, Vec3(5, 0, 0)) == doctest::Approx(0.5));
  CHECK((closest_boundary_point(wall, Vec3(5, 0, 0)) - Vec3(5, 0.5, 0)).norm() < 1e-12);
  CHECK(signed_distance(wall, Vec3(12, 5, 0)) == doctest::Approx(std::hypot(2.0, 3.0)));
  CHECK(signed_distance(wall, Vec3(5, 1.0, 0)) == doctest::Approx(-0.5));
  // z is ignored for flat boxes
  CHECK(signed_distance(wall, Vec3(5, 0, 7)) == doctest::Approx(0.5));
}

TEST_CASE("sensed points lie on boundaries within range, one per obstacle") {
  Gen gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Obstacle> obstacles;
    for (int k = 0; k < 6; ++k) {
      if (gen.coin()) {
        obstacles.push_back(Circle{gen.planar(-6, 6), gen.uniform(0.2, 1.5)});
      } else {
        const Vec3 lo = gen.planar(-6, 6);
        obstacles.push_back(Box{lo, Vec3(lo + Vec3(gen.uniform(0.2, 3), gen.uniform(0.2, 3), 0))});
      }
    }
    const Environment env = with(obstacles);
    Vec3 p = gen.planar(-6, 6);
    while (min_obstacle_distance(env, p) <= 0) p = gen.planar(-6, 6);
    const SensorScan scan = sense(env, p, 3.0);
    CHECK(scan.points.size() <= obstacles.size());
    for (const auto& o : scan.points) {
      CHECK((o - p).norm() <= 3.0 + 1e-12);
      double on_boundary = INFINITY;
      for (const auto& obstacle : obstacles) {
        on_boundary = std::min(on_boundary, std::abs(signed_distance(obstacle, o)));
      }
      CHECK(on_boundary < 1e-9);
    }
  }
}

TEST_CASE("split_left_right by lateral sign") {
  const SensorScan scan{{Vec3(5, 2, 0), Vec3(5, -1, 0)}};
  const LateralSplit split = split_left_right(scan, Vec3::Zero(), Vec3::UnitX());
  REQUIRE(split.left);
  REQUIRE(split.right);
  CHECK(*split.left == Vec3(5, 2, 0));
  CHECK(*split.right == Vec3(5, -1, 0));
}

TEST_CASE("split_left_right one-sided and tie") {
  const LateralSplit left_only =
      split_left_right(SensorScan{{Vec3(1, 1, 0), Vec3(2, 0.5, 0)}}, Vec3::Zero(), Vec3::UnitX());
  CHECK(left_only.left);
  CHECK_FALSE(left_only.right);

  const LateralSplit ahead =
      split_left_right(SensorScan{{Vec3(2, 0, 0)}}, Vec3::Zero(), Vec3::UnitX());
  CHECK_FALSE(ahead.left);
  REQUIRE(ahead.right);
  CHECK(*ahead.right == Vec3(2, 0, 0));
}

TEST_CASE("split_left_right picks the nearest point on each side and covers every point") {
  Gen gen(22);
  for (int trial = 0; trial < 500; ++trial) {
    SensorScan scan;
    const std::size_t count = 1 + gen.index(6);
    for (std::size_t k = 0; k < count; ++k) scan.points.push_back(gen.planar(-3, 3));
    const Vec3 p = gen.planar(-1, 1);
    const Vec3 u = Vec3(gen.uniform(-1, 1), gen.uniform(-1, 1), 0).normalized();
    const LateralSplit split = split_left_right(scan, p, u);
    const Vec3 side = lateral_axis(u);
    std::size_t left = 0;
    std::size_t right = 0;
    double best_left = INFINITY;
    double best_right = INFINITY;
    for (const auto& o : scan.points) {
      if ((o - p).dot(side) > 0) {
        ++left;
        best_left = std::min(best_left, (o - p).norm());
      } else {
        ++right;
        best_right = std::min(best_right, (o - p).norm());
      }
    }
    CHECK(left + right == count);
    CHECK(static_cast<bool>(split.left) == (left > 0));
    CHECK(static_cast<bool>(split.right) == (right > 0));
    if (split.left) CHECK((*split.left - p).norm() == best_left);
    if (split.right) CHECK((*split.right - p).norm() == best_right);
  }
}

TEST_CASE("estimate_width examples") {
  CHECK(estimate_width(Vec3(5, 2, 0), Vec3(5, -1, 0), Vec3(1, 0, 0)) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(estimate_width(Vec3(1, 0, 0), Vec3(4, 0, 0), Vec3(1, 0, 0)) == doctest::Approx(0.0));
  CHECK(estimate_width(Vec3(15, 2, 0), Vec3(15, -1, 0), Vec3(1, 0, 0)) ==
        doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("estimate_width is symmetric and translation invariant") {
  Gen gen(23);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec3 a = gen.vec(-5, 5);
    const Vec3 b = gen.vec(-5, 5);
    const Vec3 u = Vec3(gen.uniform(-1, 1), gen.uniform(-1, 1), 0).normalized();
    const Vec3 shift = gen.vec(-20, 20);
    const double w = estimate_width(a, b, u);
    CHECK(estimate_width(b, a, u) == doctest::Approx(w).epsilon(1e-12));
    CHECK(estimate_width(Vec3(a + shift), Vec3(b + shift), u) ==
          doctest::Approx(w).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("generate_forest count follows density times area") {
  ForestSpec spec;
  spec.region = Box{Vec3(0, 0, 0), Vec3(20, 10, 0)};
  spec.density = 0.05;
  const auto trees = generate_forest(spec, 1);
  CHECK(trees.size() == 10);
  for (const auto& t : trees) {
    const auto* c = std::get_if<Circle>(&t);
    REQUIRE(c);
    CHECK(c->radius >= spec.radius_min);
    CHECK(c->radius <= spec.radius_max);
    CHECK(c->center.x() >= 0);
    CHECK(c->center.x() <= 20);
    CHECK(c->center.y() >= 0);
    CHECK(c->center.y() <= 10);
  }

  spec.density = 0.0;
  CHECK(generate_forest(spec, 1).empty());
}

TEST_CASE("generate_forest is deterministic per seed") {
  ForestSpec spec;
  const auto a = generate_forest(spec, 42);
  const auto b = generate_forest(spec, 42);
  const auto c = generate_forest(spec, 43);
  REQUIRE(a.size() == b.size());
  bool differs = a.size() != c.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& ca = std::get<Circle>(a[k]);
    const auto& cb = std::get<Circle>(b[k]);
    CHECK(ca.center == cb.center);
    CHECK(ca.radius == cb.radius);
    if (!differs) differs = ca.center != std::get<Circle>(c[k]).center;
  }
  CHECK(differs);
}

TEST_CASE("generate_forest honours gap, lane and keepout") {
  Gen gen(24);
  for (int trial = 0; trial < 100; ++trial) {
    ForestSpec spec;
    spec.region = Box{Vec3(0, -6, 0), Vec3(14, 6, 0)};
    spec.radius_min = 0.2;
    spec.radius_max = 0.3;
    spec.min_gap = gen.uniform(0.5, 3.0);
    spec.lane_depth = gen.uniform(0.0, 4.0);
    spec.keepout = {Box{Vec3(4, -1, 0), Vec3(6, 1, 0)}};
    const auto trees = generate_forest(spec, static_cast<std::uint64_t>(trial));
    for (std::size_t i = 0; i < trees.size(); ++i) {
      const auto& a = std::get<Circle>(trees[i]);
      CHECK(signed_distance(spec.keepout[0], a.center) > a.radius);
      for (std::size_t j = i + 1; j < trees.size(); ++j) {
        const auto& b = std::get<Circle>(trees[j]);
        const Vec3 d = a.center - b.center;
        const double reach = a.radius + b.radius;
        CHECK(d.norm() - reach >= spec.min_gap);
        if (std::abs(d.x()) < spec.lane_depth) CHECK(std::abs(d.y()) - reach >= spec.min_gap);
      }
    }
  }
}

TEST_CASE("generate_forest returns fewer trees when crowded") {
  ForestSpec spec;
  spec.region = Box{Vec3(0, 0, 0), Vec3(4, 4, 0)};
  spec.density = 1.0;
  spec.min_gap = 1.0;
  const auto trees = generate_forest(spec, 3);
  CHECK(trees.size() < 16);
  CHECK_FALSE(trees.empty());
}

TEST_CASE("environment validation") {
  Environment env;
  CHECK_NOTHROW(validate(env, Vec3::UnitX()));
  env.goal_line = 100.0;
  CHECK_THROWS_WITH_AS(validate(env, Vec3::UnitX()), doctest::Contains("goal_line"),
                       ValidationError);
  env.goal_line = 10.0;
  env.obstacles.push_back(Circle{Vec3::Zero(), 0.0});
  CHECK_THROWS_AS(validate(env, Vec3::UnitX()), ValidationError);
  CHECK_THROWS_AS(validate(Obstacle{Box{Vec3(1, 1, 0), Vec3(0, 2, 0)}}), ValidationError);

  ForestSpec forest;
  forest.radius_min = 0.6;
  forest.radius_max = 0.5;
  CHECK_THROWS_AS(validate(forest), ValidationError);
}
