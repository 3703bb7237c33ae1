#include "laststop/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace laststop {

PoissonLaw::PoissonLaw(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("Poisson mean must satisfy 0 < lambda < infinity");
}

double kappa(double theta, int m) {
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");
  if (m < 1) throw ValidationError("rank m must be positive");
  return std::exp(-static_cast<double>(m) / theta);
}

double asymptotic_value(int m) {
  if (m < 1) throw ValidationError("rank m must be positive");
  const double md = static_cast<double>(m);
  return std::exp(md * std::log(md) - md - std::lgamma(md + 1.0));
}

double poisson_pmf(const PoissonLaw& law, int j) {
  if (j < 0) throw ValidationError("Poisson support is the nonnegative integers");
  const double jd = static_cast<double>(j);
  return std::exp(-law.lambda() + jd * std::log(law.lambda()) - std::lgamma(jd + 1.0));
}

TvReport tv_distance(const SuffixDistribution& dist, const PoissonLaw& law,
                     const SuffixSums& sums) {
  if (!dist.complete())
    throw IncompleteDistributionError(
        "total variation needs a complete distribution (overflow above 1e-12)");

  const int cap = dist.cap();
  const int max_terms = std::max(dist.trial_count(), 0) + 200;
  double l1 = 0.0;
  double cumulative = 0.0;
  for (int j = 0; j <= cap || (cumulative <= 1.0 - 1e-14 && j < max_terms); ++j) {
    const double q = poisson_pmf(law, j);
    const double a = j <= cap ? dist.mass[static_cast<std::size_t>(j)] : 0.0;
    l1 += std::fabs(a - q);
    cumulative += q;
  }
  const double poisson_tail = std::max(0.0, 1.0 - cumulative);
  if (poisson_tail > 1e-12)
    throw ComputationError("Poisson tail not resolved within the term budget");

  TvReport report;
  report.tv = 0.5 * (l1 + poisson_tail + dist.overflow);
  const double lambda = sums.lambda;
  const double lambda2 = sums.lambda2;
  report.lecam_upper = lambda2;
  if (lambda > 0.0) {
    report.bh_lower = (1.0 / 32.0) * std::min(1.0, 1.0 / lambda) * lambda2;
    report.bh_upper = (1.0 - std::exp(-lambda)) / lambda * lambda2;
  }
  return report;
}

std::pair<double, double> lambda_bounds(double theta, int k, int n) {
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");
  if (k < 1 || k > n) throw ValidationError("need 1 <= k <= n");
  // Sandwich lambda_{n,k} = sum_{i=k-1}^{n-1} theta/(i+theta) between the
  // integrals of theta/(x+theta) over [k-1, n] and [k-2, n-1]. The upper
  // integral diverges when k + theta <= 2; there the first term equals 1
  // exactly and only the tail needs the bound.
  const double lower = theta * std::log((n + theta) / (k + theta - 1.0));
  double upper;
  if (k + theta > 2.0) {
    upper = theta * std::log((n + theta - 1.0) / (k + theta - 2.0));
  } else {
    upper = 1.0 + theta * std::log((n + theta - 1.0) / theta);
  }
  return {lower, upper};
}

double riemann_limit_check(double theta, int m, double kappa_value) {
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");
  if (m < 1) throw ValidationError("rank m must be positive");
  if (!(kappa_value > 0.0) || !(kappa_value < 1.0))
    throw ValidationError("kappa must lie in (0, 1)");
  const double x = theta * std::log(1.0 / kappa_value);
  return std::exp(m * std::log(x) - std::lgamma(static_cast<double>(m) + 1.0));
}

}  // namespace laststop
