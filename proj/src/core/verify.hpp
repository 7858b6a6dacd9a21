// SPDX-License-Identifier: Apache-2.0
//
// Named self-checks of the discretization, the solvers, the noise, and
// the scheme's exact identities.  Each check is pure and deterministic
// for a fixed config seed, so the emitted table is byte-stable across
// runs and thread counts.

#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"

namespace sfsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic one-line summary with key numbers
};

// Runs the full suite.  The config's seed feeds the randomized checks;
// mesh/step sizes of the checks themselves are fixed internally so the
// suite has a predictable cost.
std::vector<CheckResult> run_verification(const RunConfig& cfg);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace sfsim
