#pragma once

#include <string>
#include <vector>

namespace um::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Suite names accepted by run_suite (plus "all" at the CLI level).
std::vector<std::string> suite_names();

// Execute every invariant check of one module suite. Throws
// std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& suite);

}  // namespace um::verify
