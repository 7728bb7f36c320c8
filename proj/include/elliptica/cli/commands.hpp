#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "elliptica/cli/config.hpp"

namespace elliptica::cli {

struct CheckResult {
  std::string name;
  long long identities = 0;
  double max_rel_dev = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

/// The selfcheck suite: theta identities, theta-ratio consistency, route
/// agreement, AGM against quadrature, the two mu^2 routes, Lambert inverse.
std::vector<CheckResult> run_selfcheck(const RunConfig& cfg);

/// Dispatches cfg.command. Data goes to cfg.out (or `out`), diagnostics to `err`.
/// Returns 0 on success, 1 on a failed run or check.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elliptica::cli
