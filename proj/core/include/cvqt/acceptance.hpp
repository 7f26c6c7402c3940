#pragma once

#include <string>
#include <vector>

namespace cvqt {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;     // value vs expectation, one line per sub-check
  double seconds = 0.0;
};

/// Runs the built-in verification suite (closed-form reproductions,
/// circuit-model equivalence, calibration, entanglement measures, fit
/// round-trips, tomography end-to-end, physicality fuzzing). `only` = 0 runs
/// everything, otherwise the single criterion with that id.
std::vector<CriterionResult> run_acceptance(int jobs = 1, int only = 0);

/// Formats one pass/fail line per criterion.
std::string format_acceptance_table(const std::vector<CriterionResult>& results);

}  // namespace cvqt
