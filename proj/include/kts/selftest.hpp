#pragma once

// The eight acceptance criteria as library checks, run by `ktsctl selftest`.
// Each criterion reports its own pass/fail, check count and first failures.

#include <cstdint>
#include <string>
#include <vector>

namespace kts {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool ok = true;
  int64_t checks = 0;
  std::vector<std::string> failures;  // first 10
  double seconds = 0;
  double time_limit = 0;  // seconds; 0 when unbounded
  std::string detail;

  void check(bool cond, const std::string& what);
  std::string line() const;
};

// Criterion ids 1..8; throws PreconditionError on other ids.
CriterionResult run_criterion(int id, uint64_t seed = 20240611);
// Empty selects all eight.
std::vector<CriterionResult> run_selftest(const std::vector<int>& ids = {}, uint64_t seed = 20240611);

}  // namespace kts
