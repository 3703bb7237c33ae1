#pragma once

#include <utility>
#include <vector>

#include "laststop/profile.hpp"

namespace laststop {

/// Probability mass of the success count over trials start..end, truncated at
/// a cap. mass[j] = P(exactly j successes); overflow is the exact probability
/// of more than cap successes, tracked through the sweep rather than inferred
/// by subtraction.
struct SuffixDistribution {
  int start = 1;
  int end = 0;
  std::vector<double> mass;
  double overflow = 0.0;

  int cap() const noexcept { return static_cast<int>(mass.size()) - 1; }
  int trial_count() const noexcept { return end - start + 1; }
  bool complete(double tol = 1e-12) const noexcept { return overflow <= tol; }
};

/// Suffix moments: lambda = sum of p_j, lambda2 = sum of p_j^2 over j = k..n.
struct SuffixSums {
  double lambda = 0.0;
  double lambda2 = 0.0;
};

/// Dense table of s_j(k, n) for every start index k = 1..n+1 and j = 0..m_max,
/// built by a single backward sweep that prepends one trial per step.
/// Row k is bit-identical to suffix_distribution(profile, k, m_max).
class SuffixMassTable {
 public:
  SuffixMassTable(const SuccessProfile& profile, int m_max);

  int n() const noexcept { return n_; }
  int m_max() const noexcept { return m_max_; }

  /// s_j(k, n); k in [1, n+1], j in [0, m_max].
  double s(int k, int j) const;
  double overflow(int k) const;
  SuffixDistribution row(int k) const;

 private:
  int n_ = 0;
  int m_max_ = 0;
  int width_ = 1;
  std::vector<double> mass_;
  std::vector<double> overflow_;
};

/// Probability of zero successes in trials k..n; the empty suffix gives 1.
double s0(const SuccessProfile& profile, int k);

/// Probability of exactly m successes in trials k..n, via the backward
/// probability-space recursion (never via raw odds products). m beyond the
/// suffix length gives exactly 0.
double s_m(const SuccessProfile& profile, int k, int m);

/// Full truncated distribution of the success count over trials k..n.
SuffixDistribution suffix_distribution(const SuccessProfile& profile, int k, int cap);

/// All suffix masses up to order m_max in one O(n * m_max) sweep.
SuffixMassTable all_suffix_masses(const SuccessProfile& profile, int m_max);

/// Smallest cap whose overflow stays below tol, found by doubling from a
/// seed cap. Keeps large-n distributions affordable when the mass
/// concentrates far below the suffix length.
SuffixDistribution complete_suffix_distribution(const SuccessProfile& profile, int k,
                                                double tol = 1e-12);

/// m-th elementary symmetric polynomial of the odds r_k..r_n, evaluated by
/// the backward recursion R_m(k) = R_m(k+1) + r_k R_{m-1}(k+1) with
/// compensated accumulation. Kept as an independently coded cross-check of
/// the probability-space sweep; throws InfiniteOddsError if the range holds a
/// certain trial and OverflowError if a partial result leaves the double range.
double elementary_symmetric_R(const OddsSequence& odds_seq, int k, int n, int m);

/// Compensated partial sums of p_j and p_j^2 over j = k..n.
SuffixSums suffix_sums(const SuccessProfile& profile, int k);

/// suffix_sums for every k from one backward pass (identical values).
class SuffixSumTable {
 public:
  explicit SuffixSumTable(const SuccessProfile& profile);
  int n() const noexcept { return n_; }
  double lambda(int k) const;
  double lambda2(int k) const;
  SuffixSums at(int k) const { return {lambda(k), lambda2(k)}; }

 private:
  int n_ = 0;
  std::vector<double> lambda_;
  std::vector<double> lambda2_;
};

/// Lowest and highest index of maximal mass. Poisson-binomial masses are
/// strongly unimodal, so the two differ by at most one. Requires either a
/// complete distribution or a mass sequence already strictly decreasing at
/// the cap (which pins the mode below it); otherwise throws
/// IncompleteDistributionError.
std::pair<int, int> mode_of(const SuffixDistribution& dist);

enum class DarrochCase { ModeExactlyM, ModeMOrMPlusOne, ModeExactlyMPlusOne };

/// Darroch's rule: the bracket the mode of an n-trial Poisson-binomial
/// distribution with mean mu must fall in, with m = floor(mu).
struct DarrochBracket {
  DarrochCase kind = DarrochCase::ModeExactlyM;
  int m = 0;

  int mode_lo() const noexcept { return kind == DarrochCase::ModeExactlyMPlusOne ? m + 1 : m; }
  int mode_hi() const noexcept { return kind == DarrochCase::ModeExactlyM ? m : m + 1; }
};

DarrochBracket darroch_bracket(double mu, int n);

}  // namespace laststop
