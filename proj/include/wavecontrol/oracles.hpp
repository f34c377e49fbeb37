#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavecontrol/system.hpp"

namespace wavecontrol {

/// One independently checkable fact about a tiny assembled instance.
struct OracleCheck {
  std::string name;
  double value = 0.0;      // measured discrepancy or ratio
  double threshold = 0.0;  // pass bound on `value` (see `larger_is_better`)
  bool larger_is_better = false;
  bool pass = false;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool pass = false;  // conjunction of all checks
};

/** Dense-oracle suite on a tiny interval instance (3 interior dofs, 4 time
    steps): matrix symmetry, dense SVD kernel check, sparse solve against a
    dense LU factorization, and a central-difference probe of the Lagrangian
    gradient against A x - b. Every reference value is computed by a route
    independent of the assembly under test. */
OracleReport run_oracle_suite(std::uint64_t seed = 0x5eedULL);

}  // namespace wavecontrol
