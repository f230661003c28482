#pragma once

#include <stdexcept>
#include <string>

namespace sisph {

/// Invalid case or scheme configuration detected at setup.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Unrecoverable numerical failure during a run (NaN, runaway shift).
class SimulationError : public std::runtime_error {
 public:
  explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sisph
