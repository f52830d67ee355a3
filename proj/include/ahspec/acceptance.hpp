#pragma once

#include <string>
#include <vector>

namespace ahspec {

// One acceptance criterion: named checks with machine-readable rows plus a
// one-line verdict.  Rows use acceptance_columns(); wall time stays out of
// the rows so cached reruns reproduce the bytes.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;  // every check row passed and the runtime budget held
  double seconds = 0;
  double budget_seconds = 0;
  std::string detail;  // compact measurements behind the verdict
  std::vector<std::vector<std::string>> rows;
};

// criterion, name, check, value, target, within, pass.  "within" is the
// allowed relative deviation for eq checks and the allowed slack for bound
// checks; value and target are the measured and required numbers.
const std::vector<std::string>& acceptance_columns();

// Criteria 1..10 run in process.  Criterion 11 (byte determinism of the
// `acceptance` subcommand) drives the installed binary twice and lives with
// the harness that knows the executable path.
int criterion_count();
CriterionResult run_criterion(int index);

}  // namespace ahspec
