#pragma once

#include <string>
#include <vector>

namespace relspec {

enum class VerifyLevel { fast, full };

VerifyLevel verify_level_from_string(const std::string& name);

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::fast;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  // Deterministic text: no timings, no environment, identical across thread counts.
  std::string render() const;
};

// Named invariant checks over all modules. fast stays at small dimensions;
// full adds 200-dimensional models and stochastic convergence. threads only
// changes scheduling, never results.
VerifyReport verify_suite(VerifyLevel level, int threads = 1);

}  // namespace relspec
