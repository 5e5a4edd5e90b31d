#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

// End-to-end checks of the closed-loop laboratory, shared by the acceptance
// test binary and `drrs verify`.
namespace drrs::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  /// drrs executable for the byte-identical CLI check; when empty the two
  /// runs are made in-process through the same code path.
  std::filesystem::path drrs_executable;
  /// Scratch directory for CLI outputs; a temporary one when empty.
  std::filesystem::path work_dir;
};

std::vector<CriterionResult> run_all(const Options& options);

/// One "PASS|FAIL <id> <title> (<detail>, <seconds>)" line per criterion.
void print(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace drrs::acceptance
