#pragma once

#include <string>
#include <vector>

#include "swarm/simulator.hpp"

namespace swarm {

/// A 1 m passage between two rectangular rock walls, with rounded mouths at
/// both ends. Each mouth is a pair of large circles tangent to the passage
/// walls, so the free width narrows smoothly on the way in and widens again
/// on the way out.
struct CaveSpec {
  double entry_x = 36.0;   // passage start, along-track
  double length = 3.0;     // passage length
  double gap = 1.0;        // passage width
  double entry_radius = 20.0;
  double exit_radius = 2.0;
  double wall_extent = 8.0;  // lateral reach of the rock walls from the axis
};

std::vector<Obstacle> cave_obstacles(const CaveSpec& cave);

/// Forest region followed by the cave, swarm of five starting on the left.
/// Controller gains and cruise speed are the tuned preset values, not the
/// SwarmParams defaults.
Scenario corridor_scenario(const FormationConfig& config, const CaveSpec& cave = {});

Scenario pentagon_preset();
Scenario vshape_preset();

/// "pentagon" or "vshape"; throws ValidationError otherwise.
Scenario preset(const std::string& name);

/// Along-track distance from the centre of the start region to the goal line.
double course_length(const Scenario& scenario);

}  // namespace swarm
