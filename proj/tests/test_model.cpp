#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "support.hpp"
#include "swarm/model.hpp"

using namespace swarm;
using testing::Gen;

TEST_CASE("step_dynamics advances position with the old velocity") {
  const RobotState s{Vec3(0, 0, 0), Vec3(1, 0, 0)};
  const RobotState next = step_dynamics(s, Vec3(0, 1, 0), 0.1);
  CHECK(next.position.isApprox(Vec3(0.1, 0, 0)));
  CHECK(next.velocity.isApprox(Vec3(1, 0.1, 0)));
}

TEST_CASE("step_dynamics with zero input keeps velocity") {
  const RobotState s{Vec3(2, -1, 0.5), Vec3(0.3, 0.4, 0)};
  const RobotState next = step_dynamics(s, Vec3::Zero().eval(), 0.1);
  CHECK(next.velocity == s.velocity);
  CHECK((next.position - (s.position + 0.1 * s.velocity)).norm() == 0.0);
}

TEST_CASE("step_dynamics zero state is a fixed point") {
  const RobotState s{};
  const RobotState next = step_dynamics(s, Vec3::Zero().eval(), 0.1);
  CHECK(next.position == Vec3::Zero());
  CHECK(next.velocity == Vec3::Zero());
}

TEST_CASE("step_dynamics rejects non-finite input") {
  const RobotState s{};
  CHECK_THROWS_AS(step_dynamics(s, Vec3(NAN, 0, 0), 0.1), ValidationError);
  CHECK_THROWS_AS(step_dynamics(RobotState{Vec3(INFINITY, 0, 0), Vec3::Zero()}, Vec3::Zero().eval(), 0.1),
                  ValidationError);
  CHECK_THROWS_AS(step_dynamics(s, Vec3::Zero().eval(), 0.0), ValidationError);
}

TEST_CASE("step_dynamics is linear") {
  Gen gen(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const RobotState a{gen.vec(-10, 10), gen.vec(-2, 2)};
    const RobotState b{gen.vec(-10, 10), gen.vec(-2, 2)};
    const Vec3 ua = gen.vec(-2, 2);
    const Vec3 ub = gen.vec(-2, 2);
    const RobotState sum{a.position + b.position, a.velocity + b.velocity};
    const RobotState lhs = step_dynamics(sum, Vec3(ua + ub), 0.1);
    const RobotState na = step_dynamics(a, ua, 0.1);
    const RobotState nb = step_dynamics(b, ub, 0.1);
    CHECK((lhs.position - (na.position + nb.position)).norm() < 1e-12);
    CHECK((lhs.velocity - (na.velocity + nb.velocity)).norm() < 1e-12);
  }
}

TEST_CASE("clamp_norm examples") {
  CHECK(clamp_norm(Vec3(3, 4, 0), 2.0).isApprox(Vec3(1.2, 1.6, 0)));
  CHECK(clamp_norm(Vec3(1, 0, 0), 2.0) == Vec3(1, 0, 0));
  CHECK(clamp_norm(Vec3(0, 0, 0), 2.0) == Vec3::Zero());
  CHECK_THROWS_AS(clamp_norm(Vec3(1, 0, 0), -1.0), ValidationError);
}

TEST_CASE("clamp_norm is idempotent, non-expanding and keeps direction") {
  Gen gen(12);
  for (int trial = 0; trial < 10000; ++trial) {
    const Vec3 v = gen.vec(-5, 5);
    const double bound = gen.uniform(0.0, 4.0);
    const Vec3 once = clamp_norm(v, bound);
    CHECK(once.norm() <= std::max(bound, 0.0) + 1e-12);
    CHECK(once.norm() <= v.norm() + 1e-12);
    CHECK((clamp_norm(once, bound) - once).norm() <= 1e-12);
    if (once.norm() > 0) {
      CHECK((once.normalized() - v.normalized()).norm() < 1e-12);
    }
  }
}

TEST_CASE("formation_width examples") {
  const std::vector<Vec3> spanning{Vec3(1, 2, 0), Vec3(0.5, -2, 0), Vec3(-1, 1, 0),
                                   Vec3(-1, -1, 0), Vec3(0.5, 0, 0)};
  CHECK(formation_width<double>(spanning, Vec3::UnitX()) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(formation_width(line_formation(5, 1.0, Vec3::UnitX()), Vec3::UnitX()) ==
        doctest::Approx(0.0));
  CHECK(formation_width<double>(std::vector<Vec3>{Vec3(3, 4, 0)}, Vec3::UnitX()) == 0.0);
}

TEST_CASE("formation_width is translation invariant and scales with kappa") {
  Gen gen(13);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Vec3> offsets;
    for (int k = 0; k < 5; ++k) offsets.push_back(gen.planar(-3, 3));
    const Vec3 u = Vec3(gen.uniform(-1, 1), gen.uniform(-1, 1), 0).normalized();
    const double w = formation_width<double>(offsets, u);
    const Vec3 shift = gen.vec(-10, 10);
    const double kappa = gen.uniform(-1, 1);
    std::vector<Vec3> moved;
    std::vector<Vec3> scaled;
    for (const auto& d : offsets) {
      moved.push_back(d + shift);
      scaled.push_back(kappa * d);
    }
    CHECK(formation_width<double>(moved, u) == doctest::Approx(w).epsilon(1e-9));
    CHECK(formation_width<double>(scaled, u) == doctest::Approx(std::abs(kappa) * w).epsilon(1e-9));
  }
}

TEST_CASE("validated enforces parameter invariants") {
  SwarmParams p;
  CHECK_NOTHROW(validated(p));

  SwarmParams bad = p;
  bad.lambda = 2.0;
  CHECK_THROWS_WITH_AS(validated(bad), doctest::Contains("params.lambda"), ValidationError);
  bad = p;
  bad.r_a = 0.6;
  CHECK_THROWS_WITH_AS(validated(bad), doctest::Contains("params.r_a"), ValidationError);
  bad = p;
  bad.r_s = 0.3;
  CHECK_THROWS_AS(validated(bad), ValidationError);
  bad = p;
  bad.k_o = -0.1;
  CHECK_THROWS_AS(validated(bad), ValidationError);
  bad = p;
  bad.tau = 0.0;
  CHECK_THROWS_AS(validated(bad), ValidationError);

  SwarmParams scaled = p;
  scaled.u_ref = Vec3(3, 4, 0);
  CHECK(validated(scaled).u_ref.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("line generator is zero mean") {
  const FormationConfig line = named_formation("line", 3, 1.0, Vec3::UnitX());
  REQUIRE(line.offsets.size() == 3);
  CHECK(line.offsets[0].isApprox(Vec3(1, 0, 0)));
  CHECK(line.offsets[1].norm() < 1e-15);
  CHECK(line.offsets[2].isApprox(Vec3(-1, 0, 0)));
}

TEST_CASE("every generator returns n zero-mean offsets") {
  for (const char* name : {"pentagon", "polygon", "v-shape", "triangle", "line"}) {
    const std::size_t n = 5;
    const FormationConfig c = named_formation(name, n, 1.5, Vec3(1, 1, 0).normalized(), 2.0, 0.3);
    CHECK(c.offsets.size() == n);
    Vec3 mean = Vec3::Zero();
    for (const auto& d : c.offsets) mean += d;
    CHECK(mean.norm() < 1e-12);
  }
  CHECK_THROWS_AS(named_formation("hexagon", 5, 1.0, Vec3::UnitX()), ValidationError);
  CHECK_THROWS_AS(named_formation("pentagon", 4, 1.0, Vec3::UnitX()), ValidationError);
  CHECK_THROWS_AS(named_formation("line", 4, 0.0, Vec3::UnitX()), ValidationError);
}

TEST_CASE("pentagon width is 2 R sin 72") {
  const FormationConfig c = polygon_formation(5, 2.0, Vec3::UnitX());
  const double expected = 2.0 * 2.0 * std::sin(2.0 * std::numbers::pi / 5.0);
  CHECK(formation_width(c, Vec3::UnitX()) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("v-shape rows and stagger") {
  const FormationConfig plain = vshape_formation(5, 1.0, Vec3::UnitX());
  // Apex leads by one row on the first pair and two on the second.
  std::multiset<double> along;
  for (const auto& d : plain.offsets) along.insert(std::round(d.x() * 1e9) / 1e9);
  CHECK(along.count(std::round(plain.offsets[1].x() * 1e9) / 1e9) == 2);
  CHECK(formation_width(plain, Vec3::UnitX()) == doctest::Approx(4.0));

  const FormationConfig staggered = vshape_formation(5, 0.7, Vec3::UnitX(), 3.5, 0.25);
  std::set<double> distinct;
  for (const auto& d : staggered.offsets) distinct.insert(d.x());
  CHECK(distinct.size() == 5);
  // Right arm trails the left arm by a quarter of the row depth.
  CHECK(staggered.offsets[1].x() - staggered.offsets[2].x() ==
        doctest::Approx(0.25 * 3.5 * 0.7).epsilon(1e-12));
  CHECK(formation_width(staggered, Vec3::UnitX()) == doctest::Approx(4 * 0.7));
  CHECK_THROWS_AS(vshape_formation(5, 1.0, Vec3::UnitX(), 0.0), ValidationError);
  CHECK_THROWS_AS(vshape_formation(5, 1.0, Vec3::UnitX(), 1.0, -0.1), ValidationError);
}

TEST_CASE("make_formation recentres and is idempotent bit for bit") {
  Gen gen(14);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec3> raw;
    for (int k = 0; k < 5; ++k) raw.push_back(gen.vec(-4, 4));
    const FormationConfig once = make_formation("x", raw);
    const FormationConfig twice = make_formation("x", once.offsets);
    for (std::size_t k = 0; k < raw.size(); ++k) CHECK(twice.offsets[k] == once.offsets[k]);
  }
  CHECK_THROWS_AS(make_formation("x", {Vec3(NAN, 0, 0)}), ValidationError);
}
