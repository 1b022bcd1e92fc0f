#pragma once

#include <string>
#include <vector>

namespace mnl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast subset of the property suite (a few seconds end to end); backs the
// `mnl-bai verify` subcommand. The full suites live in the test binaries.
std::vector<CheckResult> run_self_checks();

}  // namespace mnl
