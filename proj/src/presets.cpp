#include "swarm/presets.hpp"

namespace swarm {

std::vector<Obstacle> cave_obstacles(const CaveSpec& cave) {
  const double half = cave.gap / 2.0;
  const double exit_x = cave.entry_x + cave.length;
  std::vector<Obstacle> rocks;
  rocks.push_back(Box{Vec3(cave.entry_x, half, 0), Vec3(exit_x, cave.wall_extent, 0)});
  rocks.push_back(Box{Vec3(cave.entry_x, -cave.wall_extent, 0), Vec3(exit_x, -half, 0)});
  rocks.push_back(Circle{Vec3(cave.entry_x, half + cave.entry_radius, 0), cave.entry_radius});
  rocks.push_back(Circle{Vec3(cave.entry_x, -half - cave.entry_radius, 0), cave.entry_radius});
  rocks.push_back(Circle{Vec3(exit_x, half + cave.exit_radius, 0), cave.exit_radius});
  rocks.push_back(Circle{Vec3(exit_x, -half - cave.exit_radius, 0), cave.exit_radius});
  return rocks;
}

Scenario corridor_scenario(const FormationConfig& config, const CaveSpec& cave) {
  Scenario s;
  s.params = SwarmParams{};
  s.params.n = config.offsets.size();
  s.params.v_ref = 0.4;
  s.params.k_f = 0.2;
  s.params.k_t = 3.0;
  s.params.k_i = 1.0;
  s.params.k_o = 0.1;
  s.params.lambda = 8.0;
  s.config = config;
  s.environment.goal_line = cave.entry_x + cave.length + 7.0;
  s.environment.bounds = Box{Vec3(-2, -8, 0), Vec3(s.environment.goal_line + 4.0, 8, 0)};
  s.environment.obstacles = cave_obstacles(cave);

  ForestSpec forest;
  forest.region = Box{Vec3(6, -6, 0), Vec3(20, 6, 0)};
  forest.density = 0.05;
  forest.radius_min = 0.2;
  forest.radius_max = 0.3;
  forest.min_gap = 3.0;
  forest.lane_depth = 4.0;
  s.forest = forest;

  s.placement = RandomPlacement{Box{Vec3(0, -2.5, 0), Vec3(4, 2.5, 0)}};
  s.max_steps = 3000;
  s.controller = Controller::Erc;
  return s;
}

Scenario pentagon_preset() {
  return corridor_scenario(polygon_formation(5, 2.0, Vec3::UnitX()));
}

Scenario vshape_preset() {
  return corridor_scenario(vshape_formation(5, 0.7, Vec3::UnitX(), 3.5, 0.25));
}

Scenario preset(const std::string& name) {
  if (name == "pentagon") return pentagon_preset();
  if (name == "vshape" || name == "v-shape") return vshape_preset();
  throw ValidationError("unknown preset '" + name + "' (expected pentagon or vshape)");
}

double course_length(const Scenario& scenario) {
  const Vec3 u = scenario.params.u_ref.normalized();
  double start = 0.0;
  if (const auto* random = std::get_if<RandomPlacement>(&scenario.placement)) {
    start = (0.5 * (random->region.min + random->region.max)).dot(u);
  } else {
    const auto& positions = std::get<std::vector<Vec3>>(scenario.placement);
    for (const auto& p : positions) start += p.dot(u);
    if (!positions.empty()) start /= static_cast<double>(positions.size());
  }
  return scenario.environment.goal_line - start;
}

}  // namespace swarm
