#include "laststop/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "laststop/kernels/kernels.hpp"

namespace laststop {

namespace {

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void check_start_index(const SuccessProfile& profile, int k) {
  if (k < 1 || k > profile.size() + 1) {
    std::ostringstream msg;
    msg << "suffix start " << k << " outside [1, " << profile.size() + 1 << "]";
    throw ValidationError(msg.str());
  }
}

}  // namespace

double s0(const SuccessProfile& profile, int k) {
  check_start_index(profile, k);
  double prod = 1.0;
  for (int j = k; j <= profile.size(); ++j) prod *= 1.0 - profile.p(j);
  return prod;
}

SuffixDistribution suffix_distribution(const SuccessProfile& profile, int k, int cap) {
  check_start_index(profile, k);
  if (cap < 0) throw ValidationError("cap must be nonnegative");
  SuffixDistribution dist;
  dist.start = k;
  dist.end = profile.size();
  dist.mass.assign(static_cast<std::size_t>(cap) + 1, 0.0);
  dist.mass[0] = 1.0;
  const auto convolve = kernels::active_dispatch().convolve_step;
  for (int j = profile.size(); j >= k; --j) {
    const double p = profile.p(j);
    dist.overflow += p * dist.mass[static_cast<std::size_t>(cap)];
    convolve(p, dist.mass.data(), static_cast<std::size_t>(cap));
  }
  return dist;
}

double s_m(const SuccessProfile& profile, int k, int m) {
  if (m < 0) throw ValidationError("success count m must be nonnegative");
  check_start_index(profile, k);
  if (m > profile.size() - k + 1) return 0.0;
  return suffix_distribution(profile, k, m).mass[static_cast<std::size_t>(m)];
}

SuffixMassTable::SuffixMassTable(const SuccessProfile& profile, int m_max) {
  if (m_max < 0) throw ValidationError("m_max must be nonnegative");
  n_ = profile.size();
  m_max_ = m_max;
  width_ = m_max + 1;
  mass_.assign(static_cast<std::size_t>(n_ + 1) * width_, 0.0);
  overflow_.assign(static_cast<std::size_t>(n_ + 1), 0.0);

  std::vector<double> work(static_cast<std::size_t>(width_), 0.0);
  work[0] = 1.0;
  double overflow = 0.0;
  const auto convolve = kernels::active_dispatch().convolve_step;

  auto store = [&](int k) {
    std::copy(work.begin(), work.end(),
              mass_.begin() + static_cast<std::size_t>(k - 1) * width_);
    overflow_[static_cast<std::size_t>(k - 1)] = overflow;
  };

  store(n_ + 1);
  for (int k = n_; k >= 1; --k) {
    const double p = profile.p(k);
    overflow += p * work[static_cast<std::size_t>(m_max_)];
    convolve(p, work.data(), static_cast<std::size_t>(m_max_));
    store(k);
  }
}

double SuffixMassTable::s(int k, int j) const {
  if (k < 1 || k > n_ + 1 || j < 0 || j > m_max_)
    throw ValidationError("suffix mass index out of range");
  return mass_[static_cast<std::size_t>(k - 1) * width_ + j];
}

double SuffixMassTable::overflow(int k) const {
  if (k < 1 || k > n_ + 1) throw ValidationError("suffix mass index out of range");
  return overflow_[static_cast<std::size_t>(k - 1)];
}

SuffixDistribution SuffixMassTable::row(int k) const {
  SuffixDistribution dist;
  dist.start = k;
  dist.end = n_;
  dist.mass.assign(mass_.begin() + static_cast<std::size_t>(k - 1) * width_,
                   mass_.begin() + static_cast<std::size_t>(k) * width_);
  dist.overflow = overflow(k);
  return dist;
}

SuffixMassTable all_suffix_masses(const SuccessProfile& profile, int m_max) {
  return SuffixMassTable(profile, m_max);
}

SuffixDistribution complete_suffix_distribution(const SuccessProfile& profile, int k,
                                                double tol) {
  check_start_index(profile, k);
  const int length = profile.size() - k + 1;
  int cap = std::min(length, 64);
  for (;;) {
    SuffixDistribution dist = suffix_distribution(profile, k, cap);
    if (dist.overflow <= tol || cap >= length) return dist;
    cap = std::min(length, cap * 2);
  }
}

double elementary_symmetric_R(const OddsSequence& odds_seq, int k, int n, int m) {
  if (m < 0) throw ValidationError("order m must be nonnegative");
  if (k < 1 || n > odds_seq.size() || n < 0 || k > n + 1)
    throw ValidationError("odds range out of bounds");
  if (m == 0) return 1.0;
  if (k > n - m + 1) return 0.0;
  for (int j = k; j <= n; ++j)
    if (!odds_seq.finite_at(j)) throw InfiniteOddsError(j);

  // Slot t accumulates R_t across the backward sweep; descending t keeps the
  // R_{t-1} read at its previous-index value.
  std::vector<Kahan> acc(static_cast<std::size_t>(m) + 1);
  acc[0].sum = 1.0;
  for (int j = n; j >= k; --j) {
    const double r = odds_seq.r(j);
    const int top = std::min(m, n - j + 1);
    for (int t = top; t >= 1; --t) {
      acc[static_cast<std::size_t>(t)].add(r * acc[static_cast<std::size_t>(t) - 1].sum);
      if (std::isinf(acc[static_cast<std::size_t>(t)].sum))
        throw OverflowError("elementary symmetric polynomial exceeded double range at order " +
                            std::to_string(t));
    }
  }
  return acc[static_cast<std::size_t>(m)].sum;
}

SuffixSums suffix_sums(const SuccessProfile& profile, int k) {
  check_start_index(profile, k);
  Kahan lambda, lambda2;
  for (int j = profile.size(); j >= k; --j) {
    const double p = profile.p(j);
    lambda.add(p);
    lambda2.add(p * p);
  }
  return {lambda.sum, lambda2.sum};
}

SuffixSumTable::SuffixSumTable(const SuccessProfile& profile) {
  n_ = profile.size();
  lambda_.assign(static_cast<std::size_t>(n_ + 1), 0.0);
  lambda2_.assign(static_cast<std::size_t>(n_ + 1), 0.0);
  Kahan lambda, lambda2;
  for (int k = n_; k >= 1; --k) {
    const double p = profile.p(k);
    lambda.add(p);
    lambda2.add(p * p);
    lambda_[static_cast<std::size_t>(k - 1)] = lambda.sum;
    lambda2_[static_cast<std::size_t>(k - 1)] = lambda2.sum;
  }
}

double SuffixSumTable::lambda(int k) const {
  if (k < 1 || k > n_ + 1) throw ValidationError("suffix sum index out of range");
  return k == n_ + 1 ? 0.0 : lambda_[static_cast<std::size_t>(k - 1)];
}

double SuffixSumTable::lambda2(int k) const {
  if (k < 1 || k > n_ + 1) throw ValidationError("suffix sum index out of range");
  return k == n_ + 1 ? 0.0 : lambda2_[static_cast<std::size_t>(k - 1)];
}

std::pair<int, int> mode_of(const SuffixDistribution& dist) {
  const auto& a = dist.mass;
  const std::size_t cap = a.size() - 1;
  // An incomplete tail is acceptable once the stored sequence strictly
  // decreases into the cap: unimodality then keeps everything above the cap
  // below that shoulder.
  const bool tail_pinned = cap >= 1 && a[cap - 1] > a[cap];
  if (!dist.complete() && !tail_pinned) {
    std::ostringstream msg;
    msg << "mode may lie above the cap: overflow mass " << dist.overflow;
    throw IncompleteDistributionError(msg.str());
  }
  double best = a[0];
  int lo = 0, hi = 0;
  for (std::size_t j = 1; j < a.size(); ++j) {
    if (a[j] > best) {
      best = a[j];
      lo = hi = static_cast<int>(j);
    } else if (a[j] == best) {
      hi = static_cast<int>(j);
    }
  }
  return {lo, hi};
}

DarrochBracket darroch_bracket(double mu, int n) {
  if (n < 0) throw ValidationError("trial count must be nonnegative");
  if (!(mu >= 0.0) || !(mu <= static_cast<double>(n)))
    throw ValidationError("mean must lie in [0, n]");
  const int m = static_cast<int>(std::floor(mu));
  const double exact_lo = m + 1.0 / (m + 2);
  const double pair_hi = m + 1.0 - 1.0 / static_cast<double>(n - m + 1);
  if (mu < exact_lo) return {DarrochCase::ModeExactlyM, m};
  if (mu <= pair_hi) return {DarrochCase::ModeMOrMPlusOne, m};
  return {DarrochCase::ModeExactlyMPlusOne, m};
}

}  // namespace laststop
