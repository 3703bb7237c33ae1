#pragma once

#include <span>
#include <string>
#include <vector>

namespace laststop {

/// One cell of the embedded reference grid for the Karamata-Stirling family:
/// both thresholds, the optimal win probability s*_m(n) and the gap epsilon.
/// Cells whose published value is internally impossible carry a note and are
/// recomputed and reported instead of asserted.
struct GoldenCell {
  int m;
  double theta;
  int n;
  int odds_threshold;
  int mean_threshold;
  double win_probability;  // s*_m(n), 6 decimals
  double epsilon;          // 6 decimals
  bool assert_win;
  bool assert_epsilon;
  const char* note;  // nullptr when fully asserted
};

std::span<const GoldenCell> golden_cells();

/// Result of recomputing one golden cell with the exact engine.
struct GoldenOutcome {
  const GoldenCell* cell = nullptr;
  int odds_threshold = 0;
  int mean_threshold = 0;
  double win_probability = 0.0;
  double epsilon = 0.0;
  bool thresholds_match = false;
  bool values_match = false;  // within value_tolerance, skipped cells excluded
  std::string detail;         // human-readable mismatch description, empty if clean
};

inline constexpr double kGoldenValueTolerance = 1e-6;

/// Recomputes every golden cell. Thresholds must match exactly; values within
/// kGoldenValueTolerance. Skipped (noted) quantities are reported in `detail`
/// but never fail the comparison.
std::vector<GoldenOutcome> run_golden_comparison();

bool all_golden_pass(std::span<const GoldenOutcome> outcomes);

}  // namespace laststop
