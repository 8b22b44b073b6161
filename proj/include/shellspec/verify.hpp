#pragma once

#include <string>
#include <vector>

#include "shellspec/core.hpp"

namespace shellspec {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tol = 0.0;
  bool pass = false;
};

double anticommutation_defect(const DiracMatrices& d);

// Invariant suites. "quick": algebra and kernel identities. "full": adds the
// sphere oracle, jump relations, Bessel identities and the Schrödinger cross-check.
std::vector<CheckResult> run_verify(const std::string& level, const DiracMatrices& d = dirac_matrices());

}  // namespace shellspec
