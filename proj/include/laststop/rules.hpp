#pragma once

#include <utility>

#include "laststop/distribution.hpp"

namespace laststop {

enum class Rule { Odds, Mean, Poisson };

const char* rule_name(Rule rule);

/// A threshold stopping rule: stop at the first success on or after
/// `threshold`. Such a rule wins exactly when trials threshold..n contain m
/// successes, so win_probability = s_m(threshold, n).
struct ThresholdResult {
  Rule rule = Rule::Odds;
  int m = 0;
  int threshold = 1;
  double win_probability = 0.0;

  // Diagnostics.
  double lambda_at_threshold = 0.0;  // suffix probability sum at the threshold
  double s_m_at_threshold = 0.0;     // s_m(threshold, n)
  double s_prev_at_threshold = 0.0;  // s_{m-1}(threshold, n)
  bool degenerate = false;           // stop condition held nowhere / everywhere
  bool mean_hypotheses_hold = false; // displayed monotonicity conditions at k' (mean rule)
  bool mean_hypotheses_strict = false; // stricter variant: p_{k'} > p_{k'+1} - min rest
};

/// Optimal rule: the largest index where stopping still beats waiting,
/// k_m = max{ i in [1, n-m+1] : s_m(i, n) >= s_{m-1}(i, n) }, clamped to 1
/// when the comparison never holds. This is the argmax of the win
/// probability; on an exact two-point plateau it lands on the upper end.
ThresholdResult odds_threshold(const SuccessProfile& profile, int m);

/// Mean rule: k' = max{ i in [1, n-m] : sum_{j=i..n} p_j >= m }, clamped to 1
/// when even the full sum stays below m.
ThresholdResult mean_threshold(const SuccessProfile& profile, int m);

/// Poisson rule for the Karamata-Stirling family: the smallest k with
/// k / n >= exp(-m / theta); win probability evaluated exactly at finite n.
ThresholdResult poisson_threshold(double theta, int n, int m);

/// Win probability of the rule "stop at the first success at or after k".
double win_probability_of_threshold(const SuccessProfile& profile, int m, int k);

/// Optimal-minus-mean-rule performance gap.
struct EpsilonGap {
  double epsilon = 0.0;         // s_m(k_m, n) - s_m(k', n), nonnegative
  double bound = 0.0;           // p_{k'} * p_{k'+1}
  int threshold_lag = 0;        // k_m - k'
  bool hypotheses_hold = false; // epsilon <= bound is guaranteed only under these
  ThresholdResult odds;
  ThresholdResult mean;
};

EpsilonGap epsilon_gap(const SuccessProfile& profile, int m);

enum class ImplicationStatus { Vacuous, Confirmed, Violated };

struct ImplicationCheck {
  bool antecedent = false;
  bool consequent = false;
  ImplicationStatus status = ImplicationStatus::Vacuous;
};

/// Samuels' sign implications for the mass increments d(j) = s_j - s_{j-1}:
///   rise:   min_{k<=j<=n} p_j + sum_{k..n} p_j > m      =>  d(m) at k   > 0
///   fall:   max_{k+1<=j<=n} p_j + sum_{k+1..n} p_j < m  =>  d(m) at k+1 < 0
///   window: m <= sum_{k..n} p_j <= m+1                  =>  d(m) at k > 0
///                                                       and d(m+2) at k < 0
/// Both sides are evaluated exactly; a Violated status falsifies the theory
/// and fails the property suite.
struct SamuelsImplications {
  ImplicationCheck rise;
  ImplicationCheck fall;
  ImplicationCheck window;
};

/// Requires 1 <= k <= n-1 so that the trial after k exists.
SamuelsImplications samuels_implications(const SuccessProfile& profile, int k, int m);

enum class ModeVerdict { ModeAtCandidate, ModeAtCandidateOrNext, Inconclusive };

/// Certificate that a candidate index k* locates the mode of the win
/// probability k -> s_m(k, n). The exact verdict needs the strict window
///   m - min_{k*..n} p_j < sum_{k*..n} p_j < m + p_{k*} - p_{k*+1};
/// the bracket verdict needs the looser
///   m - p_{k*} <= sum_{k*+1..n} p_j < m.
/// Boundary equalities in the strict window route to the bracket verdict.
struct ModeCertificate {
  int candidate = 0;
  int m = 0;
  bool next_is_largest_remaining = false;  // p_{k*+1} = max_{k*+1..n} p_j
  bool step_up_below_min = false;          // p_{k*+1} - p_{k*} < min_{k*..n} p_j
  bool exact_window = false;
  bool bracket_window = false;
  ModeVerdict verdict = ModeVerdict::Inconclusive;
  int sweep_mode_lo = 0;  // argmax plateau of s_m(., n) from the sweep
  int sweep_mode_hi = 0;
  bool consistent = true; // non-Inconclusive verdict agrees with the sweep
};

ModeCertificate certify_mode(const SuccessProfile& profile, int k_star, int m);

/// Argmax plateau of k -> s_m(k, n) over k in [1, n-m+1] (exact ties only).
std::pair<int, int> win_probability_mode(const SuffixMassTable& table, int m);

}  // namespace laststop
