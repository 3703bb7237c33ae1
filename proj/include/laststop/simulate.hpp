#pragma once

#include <cstdint>

#include "laststop/profile.hpp"
#include "laststop/rules.hpp"

namespace laststop {

/// Outcome of a seeded Monte Carlo run of one threshold rule.
struct SimulationReport {
  Rule rule = Rule::Odds;
  int m = 0;
  int threshold = 1;
  std::uint64_t replications = 0;
  std::uint64_t wins = 0;
  double empirical_rate = 0.0;
  double std_error = 0.0;  // sqrt(rate (1 - rate) / replications)
  std::uint64_t seed = 0;
};

/// Simulates "stop at the first success at or after `threshold`" and counts
/// wins (exactly m successes from the stop onward). Trials are drawn from a
/// counter-based stream keyed by (seed, replication, trial), so the report is
/// bit-identical for fixed (seed, replications) regardless of how the work is
/// chunked or how many workers run it. workers = 0 picks the hardware count.
SimulationReport simulate_rule(const SuccessProfile& profile, int m, int threshold,
                               std::uint64_t replications, std::uint64_t seed,
                               Rule label = Rule::Odds, int workers = 0);

/// Odds rule and mean rule evaluated on identical trial streams (common
/// random numbers); the paired difference estimates the performance gap with
/// far lower variance than two independent runs.
struct PairedSimulation {
  SimulationReport odds;
  SimulationReport mean;
  std::uint64_t both_win = 0;
  std::uint64_t odds_only = 0;
  std::uint64_t mean_only = 0;

  double difference() const;        // odds rate - mean rate
  double paired_std_error() const;  // std error of the per-replication difference
};

PairedSimulation simulate_compare(const SuccessProfile& profile, int m,
                                  std::uint64_t replications, std::uint64_t seed,
                                  int workers = 0);

}  // namespace laststop
