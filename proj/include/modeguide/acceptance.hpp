#pragma once

#include <functional>
#include <string>
#include <vector>

#include "modeguide/matching.hpp"

namespace modeguide {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;

  std::string status() const { return skipped ? "SKIP" : (passed ? "PASS" : "FAIL"); }
};

struct AcceptanceOptions {
  bool quick = false;  // no finite-difference refinement
  int jobs = 1;
  Truncation trunc;
  double tol = 1e-12;
  std::vector<int> only;  // empty: all ten
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

}  // namespace modeguide
