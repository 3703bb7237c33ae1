#include "laststop/rules.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace laststop {

namespace {

void check_rank(const SuccessProfile& profile, int m) {
  if (m < 1 || m > profile.size() - 1)
    throw ValidationError("rank m must satisfy 1 <= m <= n-1 (n = " +
                          std::to_string(profile.size()) + ", m = " + std::to_string(m) + ")");
}

// Largest index in [1, n-m] whose suffix probability sum reaches m; 1 when
// the comparison never holds (max of the empty set, clamped).
int mean_rule_index(const SuffixSumTable& sums, int n, int m) {
  for (int i = n - m; i >= 1; --i)
    if (sums.lambda(i) >= static_cast<double>(m)) return i;
  return 1;
}

bool mean_hypotheses(const SuccessProfile& profile, int k) {
  // p_{k} >= p_{k+1} and p_{k+1} largest among the remaining trials.
  const int n = profile.size();
  if (k + 1 > n) return false;
  if (profile.p(k) < profile.p(k + 1)) return false;
  for (int j = k + 2; j <= n; ++j)
    if (profile.p(j) > profile.p(k + 1)) return false;
  return true;
}

bool mean_hypotheses_strict(const SuccessProfile& profile, int k) {
  // p_{k} > p_{k+1} - min_{k <= j <= n} p_j, plus p_{k+1} largest among the rest.
  const int n = profile.size();
  if (k + 1 > n) return false;
  double min_rest = profile.p(k);
  for (int j = k + 1; j <= n; ++j) min_rest = std::min(min_rest, profile.p(j));
  if (!(profile.p(k) > profile.p(k + 1) - min_rest)) return false;
  for (int j = k + 2; j <= n; ++j)
    if (profile.p(j) > profile.p(k + 1)) return false;
  return true;
}

ThresholdResult make_result(Rule rule, int m, int k, const SuffixMassTable& table,
                            const SuffixSumTable& sums) {
  ThresholdResult result;
  result.rule = rule;
  result.m = m;
  result.threshold = k;
  result.s_m_at_threshold = table.s(k, m);
  result.s_prev_at_threshold = table.s(k, m - 1);
  result.win_probability = result.s_m_at_threshold;
  result.lambda_at_threshold = sums.lambda(k);
  return result;
}

}  // namespace

const char* rule_name(Rule rule) {
  switch (rule) {
    case Rule::Odds: return "odds";
    case Rule::Mean: return "mean";
    case Rule::Poisson: return "poisson";
  }
  return "?";
}

ThresholdResult odds_threshold(const SuccessProfile& profile, int m) {
  check_rank(profile, m);
  const int n = profile.size();
  const SuffixMassTable table(profile, m);
  const SuffixSumTable sums(profile);

  int k = 1;
  int satisfied = 0;
  for (int i = 1; i <= n - m + 1; ++i) {
    if (table.s(i, m) >= table.s(i, m - 1)) {
      k = i;
      ++satisfied;
    }
  }
  ThresholdResult result = make_result(Rule::Odds, m, k, table, sums);
  result.degenerate = satisfied == 0 || satisfied == n - m + 1;
  return result;
}

ThresholdResult mean_threshold(const SuccessProfile& profile, int m) {
  check_rank(profile, m);
  const SuffixMassTable table(profile, m);
  const SuffixSumTable sums(profile);
  const int k = mean_rule_index(sums, profile.size(), m);
  ThresholdResult result = make_result(Rule::Mean, m, k, table, sums);
  result.mean_hypotheses_hold = mean_hypotheses(profile, k);
  result.mean_hypotheses_strict = mean_hypotheses_strict(profile, k);
  result.degenerate = sums.lambda(1) < static_cast<double>(m);
  return result;
}

ThresholdResult poisson_threshold(double theta, int n, int m) {
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");
  const SuccessProfile profile = SuccessProfile::karamata_stirling(theta, n);
  check_rank(profile, m);
  const double target = static_cast<double>(n) * std::exp(-static_cast<double>(m) / theta);
  int k = static_cast<int>(std::ceil(target));
  k = std::clamp(k, 1, n);
  const SuffixMassTable table(profile, m);
  const SuffixSumTable sums(profile);
  return make_result(Rule::Poisson, m, k, table, sums);
}

double win_probability_of_threshold(const SuccessProfile& profile, int m, int k) {
  if (m < 0) throw ValidationError("rank m must be nonnegative");
  if (k < 1 || k > profile.size())
    throw ValidationError("threshold " + std::to_string(k) + " outside [1, " +
                          std::to_string(profile.size()) + "]");
  return s_m(profile, k, m);
}

EpsilonGap epsilon_gap(const SuccessProfile& profile, int m) {
  check_rank(profile, m);
  EpsilonGap gap;
  gap.odds = odds_threshold(profile, m);
  gap.mean = mean_threshold(profile, m);
  gap.epsilon = gap.odds.win_probability - gap.mean.win_probability;
  const int kp = gap.mean.threshold;  // kp <= n-m, so kp+1 is a valid trial
  gap.bound = profile.p(kp) * profile.p(kp + 1);
  gap.threshold_lag = gap.odds.threshold - gap.mean.threshold;
  gap.hypotheses_hold = gap.mean.mean_hypotheses_hold;
  return gap;
}

SamuelsImplications samuels_implications(const SuccessProfile& profile, int k, int m) {
  const int n = profile.size();
  if (k < 1 || k > n - 1) throw ValidationError("index k must satisfy 1 <= k <= n-1");
  if (m < 1) throw ValidationError("rank m must be positive");

  const SuffixSumTable sums(profile);
  double min_from_k = profile.p(k);
  for (int j = k + 1; j <= n; ++j) min_from_k = std::min(min_from_k, profile.p(j));
  double max_after_k = profile.p(k + 1);
  for (int j = k + 2; j <= n; ++j) max_after_k = std::max(max_after_k, profile.p(j));

  const SuffixMassTable table(profile, m + 2);
  const double d_m_at_k = table.s(k, m) - table.s(k, m - 1);
  const double d_m_at_next = table.s(k + 1, m) - table.s(k + 1, m - 1);
  const double d_m2_at_k = table.s(k, m + 2) - table.s(k, m + 1);

  auto judge = [](bool antecedent, bool consequent) {
    ImplicationCheck check;
    check.antecedent = antecedent;
    check.consequent = consequent;
    check.status = !antecedent ? ImplicationStatus::Vacuous
                   : consequent ? ImplicationStatus::Confirmed
                                : ImplicationStatus::Violated;
    return check;
  };

  SamuelsImplications out;
  out.rise = judge(min_from_k + sums.lambda(k) > static_cast<double>(m), d_m_at_k > 0.0);
  // With m - 1 beyond the remaining suffix length both masses are
  // structurally zero and the falling comparison says nothing; vacuous.
  const bool fall_feasible = m <= n - k + 1;
  out.fall = judge(fall_feasible && max_after_k + sums.lambda(k + 1) < static_cast<double>(m),
                   d_m_at_next < 0.0);
  out.window = judge(static_cast<double>(m) <= sums.lambda(k) &&
                         sums.lambda(k) <= static_cast<double>(m) + 1.0,
                     d_m_at_k > 0.0 && d_m2_at_k < 0.0);
  return out;
}

ModeCertificate certify_mode(const SuccessProfile& profile, int k_star, int m) {
  const int n = profile.size();
  check_rank(profile, m);
  if (k_star < 1 || k_star > n - m)
    throw ValidationError("candidate index must satisfy 1 <= k* <= n-m");

  ModeCertificate cert;
  cert.candidate = k_star;
  cert.m = m;

  double min_from = profile.p(k_star);
  for (int j = k_star + 1; j <= n; ++j) min_from = std::min(min_from, profile.p(j));
  double max_next = profile.p(k_star + 1);
  for (int j = k_star + 2; j <= n; ++j) max_next = std::max(max_next, profile.p(j));

  const SuffixSumTable sums(profile);
  const double sum_from = sums.lambda(k_star);
  const double sum_next = sums.lambda(k_star + 1);
  const double p_star = profile.p(k_star);
  const double p_next = profile.p(k_star + 1);

  cert.next_is_largest_remaining = p_next == max_next;
  cert.step_up_below_min = p_next - p_star < min_from;
  cert.exact_window = static_cast<double>(m) - min_from < sum_from &&
                      sum_from < static_cast<double>(m) + p_star - p_next;
  cert.bracket_window = static_cast<double>(m) - p_star <= sum_next &&
                        sum_next < static_cast<double>(m);

  const bool shared = cert.next_is_largest_remaining && cert.step_up_below_min;
  cert.verdict = shared && cert.exact_window ? ModeVerdict::ModeAtCandidate
                 : shared && cert.bracket_window ? ModeVerdict::ModeAtCandidateOrNext
                                                 : ModeVerdict::Inconclusive;

  const SuffixMassTable table(profile, m);
  const auto [lo, hi] = win_probability_mode(table, m);
  cert.sweep_mode_lo = lo;
  cert.sweep_mode_hi = hi;
  switch (cert.verdict) {
    case ModeVerdict::ModeAtCandidate:
      cert.consistent = lo == k_star && hi == k_star;
      break;
    case ModeVerdict::ModeAtCandidateOrNext:
      cert.consistent = lo >= k_star && hi <= k_star + 1;
      break;
    case ModeVerdict::Inconclusive:
      cert.consistent = true;
      break;
  }
  return cert;
}

std::pair<int, int> win_probability_mode(const SuffixMassTable& table, int m) {
  const int n = table.n();
  if (m < 0 || m > table.m_max()) throw ValidationError("rank outside table range");
  int lo = 1, hi = 1;
  double best = table.s(1, m);
  for (int k = 2; k <= n - m + 1; ++k) {
    const double v = table.s(k, m);
    if (v > best) {
      best = v;
      lo = hi = k;
    } else if (v == best) {
      hi = k;
    }
  }
  return {lo, hi};
}

}  // namespace laststop
