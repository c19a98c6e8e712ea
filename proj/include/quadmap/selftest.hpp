#pragma once

// The acceptance suite: nine end-to-end checks covering classification,
// witnesses, critical-set geometry, the long-case solver, class separation,
// the two collapses, quadratic inverses, and oracle cross-checks.

#include <string>
#include <vector>

namespace quadmap {

struct CriterionResult {
  std::string name;
  bool passed = false;
  double seconds = 0;
  std::string detail;  // worst residuals / first failure description
};

// Runs all nine checks; deterministic in seed.
std::vector<CriterionResult> run_acceptance(unsigned seed = 0);

}  // namespace quadmap
