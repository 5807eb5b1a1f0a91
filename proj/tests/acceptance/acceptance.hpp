#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acceptance {

struct Check {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::vector<std::string> notes;  // diagnostics that do not affect pass/fail
  double seconds = 0.0;

  bool passed() const;
};

std::vector<int> criterion_ids();

/// Throws std::out_of_range for an unknown id.
CriterionResult run_criterion(int id);

/// One PASS/FAIL line, then an indented line per check and per note.
void print(std::ostream& os, const CriterionResult& r);

}  // namespace acceptance
