#pragma once

#include <stdexcept>
#include <string>

namespace swarm {

/// Bad input: malformed parameters, scenario files, or preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or unwritable files and malformed log files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FaultKind {
  CoincidentRobots,
  InsideObstacle,
};

/// Raised mid-run when the physical state makes a control law undefined
/// (two robots at the same point, a robot inside an obstacle).
class SimulationFault : public std::runtime_error {
 public:
  SimulationFault(FaultKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  FaultKind kind() const noexcept { return kind_; }

 private:
  FaultKind kind_;
};

}  // namespace swarm
