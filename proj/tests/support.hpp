#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "swarm/io.hpp"
#include "swarm/model.hpp"
#include "swarm/simulator.hpp"

namespace testing {

// Library notices (defaults taken, crowded forests) would drown test output.
inline const bool kQuietLogs = [] {
  spdlog::set_level(spdlog::level::err);
  return true;
}();

/// Seeded instance generator for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  bool coin() { return index(2) == 1; }

  swarm::Vec3 vec(double lo, double hi) {
    return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
  }

  swarm::Vec3 planar(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), 0.0}; }

  /// Planar points snapped to a grid of pitch `step`, so exact ties happen.
  swarm::Vec3 grid(int half_extent, double step) {
    const auto pick = [&] {
      return step * static_cast<double>(static_cast<int>(index(2 * half_extent + 1)) - half_extent);
    };
    return {pick(), pick(), 0.0};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline std::string serialize(const swarm::TrajectoryLog& log) {
  std::ostringstream out;
  swarm::write_trajectory(log, out);
  return out.str();
}

inline std::vector<swarm::RobotState> states_at(const std::vector<swarm::Vec3>& positions,
                                                const swarm::Vec3& velocity = swarm::Vec3::Zero()) {
  std::vector<swarm::RobotState> states;
  for (const auto& p : positions) states.push_back({p, velocity});
  return states;
}

}  // namespace testing
