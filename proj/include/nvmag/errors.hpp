#pragma once

#include <stdexcept>
#include <string>

namespace nvmag {

/// Invalid or inconsistent user-facing configuration. CLI exit code 2.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (singular working point, unstable integration,
/// impossible post-selection). CLI exit code 3.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nvmag
