#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace imf::verify {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Measured quantities behind the verdict.
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240607;
  /// CLI executable exercised by the reproducibility criterion.
  std::filesystem::path cli;
  /// Scratch directory for CLI outputs; a temporary one is used when empty.
  std::filesystem::path work_dir;
};

inline constexpr int kCriterionCount = 11;

/// Runs criterion `id` (1-based). A criterion passes only if its property
/// holds and it finishes within its time budget. Library errors are caught
/// and reported as failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const AcceptanceOptions& options);

/// `PASS  [ 3] title (1.2 s / 5 s): detail`
std::string format_result(const CriterionResult& result);

}  // namespace imf::verify
