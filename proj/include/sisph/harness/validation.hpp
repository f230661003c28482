#pragma once

#include <string>
#include <vector>

#include "sisph/harness/runner.hpp"

namespace sisph::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// max |u|(t) within `tolerance` (relative) of U e^{bt} for every output row
/// with t in [t_lo, t_hi].
CheckResult check_tg_decay(const Table& series, double U, double b, double t_lo, double t_hi, double tolerance);

/// l1_vel below `limit` in every output row.
CheckResult check_tg_l1(const Table& series, double limit);

/// Runs the named case at its defaults (plus overrides) and evaluates the
/// checks that apply to it.
std::vector<CheckResult> validate_case(const std::string& name, const CaseOptions& opts, const RunOptions& run);

}  // namespace sisph::harness
