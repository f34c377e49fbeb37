#pragma once

#include <stdexcept>
#include <string>

namespace wavecontrol {

/// Invalid user-facing configuration: bad parameter ranges, malformed files.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Structural misuse of an interface: wrong vector sizes, out-of-range time levels.
struct shape_error : std::runtime_error {
  explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: singular factorization, iteration breakdown, non-convergence.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wavecontrol
