#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diffinv::cli {

struct VerifyOptions {
  std::string filter;  // substring of check names; empty runs all
  bool perturb_tangent_jacobian = false;  // test hook: corrupts E' before the AD-vs-FD comparison
};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<std::string> verify_check_names();

/// Runs the selected checks, printing one PASS/FAIL line each.
std::vector<CheckOutcome> run_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace diffinv::cli
