#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relgrowth {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Module invariant suites over the bundled presentations: free-reduction
// algebra, separated-net bound, Floyd basepoint inequality, sub-girth
// equality, filter monotonicity, cylinder additivity. Each returns one
// result; run_verify_all executes all of them.
std::vector<CheckResult> run_verify_all(unsigned seed = 12345, int threads = 1);

// Prints one line per check; returns true when all pass.
bool report_verify_all(std::ostream& out, unsigned seed = 12345, int threads = 1);

}  // namespace relgrowth
