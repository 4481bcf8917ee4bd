#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kplab {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic summary (counts, worst margins)
  double seconds = 0.0;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  bool all_passed() const {
    for (const auto& c : criteria)
      if (!c.passed) return false;
    return true;
  }
};

// Runs the full verification battery (ten numbered checks) with every input
// derived deterministically from `seed`.  When `out_dir` is non-empty, one CSV
// per check plus a summary CSV are written there; the CSV bytes depend only on
// the seed, never on timing or thread count.
SuiteResult run_suite(std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace kplab
