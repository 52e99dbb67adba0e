#pragma once
// Randomized property batteries behind the `verify` CLI subcommand.  Each
// suite runs at desk scale (seconds); the acceptance test binary runs the
// larger versions with the pinned tolerances.

#include <cstdint>
#include <string>
#include <vector>

namespace telegraph::verify {

struct Check {
  std::string name;
  bool passed;
  double margin;       // distance to the failure boundary (>= 0 iff passed)
  std::string detail;  // counterexample / measured values for the report
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed;
  bool passed;
  std::vector<Check> checks;
};

const std::vector<std::string>& suite_names();  // semigroup, resolvent, ...

SuiteResult run_suite(const std::string& name, std::uint64_t seed);

}  // namespace telegraph::verify
