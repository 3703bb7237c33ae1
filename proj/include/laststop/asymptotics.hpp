#pragma once

#include <utility>

#include "laststop/distribution.hpp"

namespace laststop {

/// Poisson law with mean lambda, 0 < lambda < infinity.
class PoissonLaw {
 public:
  explicit PoissonLaw(double lambda);
  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
};

/// Limit proportion of trials to skip for the Karamata-Stirling profile:
/// kappa_m = exp(-m / theta).
double kappa(double theta, int m);

/// Limit win probability V_m = m^m exp(-m) / m!, evaluated in log space.
double asymptotic_value(int m);

/// P(Y = j) for Y ~ Poisson(lambda), evaluated in log space.
double poisson_pmf(const PoissonLaw& law, int j);

/// Total variation distance together with the computable brackets.
/// On a complete distribution with a matched-mean law,
/// bh_lower <= tv <= min(bh_upper, lecam_upper).
struct TvReport {
  double tv = 0.0;
  double lecam_upper = 0.0;  // lambda2
  double bh_lower = 0.0;     // (1/32) min(1, 1/lambda) lambda2
  double bh_upper = 0.0;     // (1 - exp(-lambda)) / lambda * lambda2
};

/// Exact total variation distance between a complete suffix distribution and
/// a Poisson law: half the l1 difference plus both residual tails. The
/// Poisson side is summed until its cumulative mass passes 1 - 1e-14, capped
/// at trial_count + 200 terms. `sums` carries the suffix moments the Le Cam
/// and Barbour-Hall brackets are built from.
TvReport tv_distance(const SuffixDistribution& dist, const PoissonLaw& law,
                     const SuffixSums& sums);

/// Logarithmic sandwich for lambda_{n,k} of the Karamata-Stirling profile:
/// theta log((n+theta)/(k+theta)) < lambda_{n,k} < theta log((n+theta-1)/(k+theta-1)).
std::pair<double, double> lambda_bounds(double theta, int k, int n);

/// Limit of the odds polynomial R_m at skip proportion kappa:
/// (theta log(1/kappa))^m / m!. Used to test convergence of the exact R_m.
double riemann_limit_check(double theta, int m, double kappa_value);

}  // namespace laststop
