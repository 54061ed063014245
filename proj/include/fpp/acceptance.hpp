#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace fpp {

struct CriterionOutcome {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  std::set<int> only;  // empty runs every criterion
};

// Runs the acceptance criteria in order. A criterion fails when any of its
// checks fails or it exceeds its runtime budget.
std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& options = {});

std::string format_outcome(const CriterionOutcome& outcome);

}  // namespace fpp
