#include "laststop/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "laststop/kernels/kernels.hpp"

namespace laststop {

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

std::vector<std::uint64_t> bernoulli_cutoffs(const SuccessProfile& profile, int lo, int hi) {
  std::vector<std::uint64_t> cutoffs(static_cast<std::size_t>(hi - lo + 1));
  for (int t = lo; t <= hi; ++t) {
    // p quantizes to the 2^-32 grid; p = 1 maps to 2^32 and always succeeds.
    cutoffs[static_cast<std::size_t>(t - lo)] =
        static_cast<std::uint64_t>(std::llround(profile.p(t) * 4294967296.0));
  }
  return cutoffs;
}

int resolve_workers(int workers, std::uint64_t replications) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (replications < 4096) return 1;
  const std::uint64_t chunks = (replications + kChunk - 1) / kChunk;
  return static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), chunks));
}

// Splits [0, replications) across workers, runs `body(begin, end, slot)` on
// each slice and joins. Slices are contiguous; results must not depend on
// the split (the kernels guarantee that per replication).
template <typename Body>
void parallel_over_reps(std::uint64_t replications, int workers, Body body) {
  if (workers == 1) {
    body(0, replications, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::uint64_t per = replications / workers;
  const std::uint64_t extra = replications % workers;
  std::uint64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t len = per + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
    pool.emplace_back(body, begin, begin + len, w);
    begin += len;
  }
  for (auto& t : pool) t.join();
}

double std_error_of(double rate, std::uint64_t replications) {
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(replications));
}

}  // namespace

SimulationReport simulate_rule(const SuccessProfile& profile, int m, int threshold,
                               std::uint64_t replications, std::uint64_t seed, Rule label,
                               int workers) {
  const int n = profile.size();
  if (replications < 1) throw ValidationError("replications must be at least 1");
  if (threshold < 1 || threshold > n)
    throw ValidationError("threshold must lie in [1, n]");
  if (m < 0) throw ValidationError("rank m must be nonnegative");

  const auto cutoffs = bernoulli_cutoffs(profile, threshold, n);
  const auto kernel = kernels::active_dispatch().suffix_count;
  const int pool = resolve_workers(workers, replications);

  std::vector<std::uint64_t> wins_by_worker(static_cast<std::size_t>(pool), 0);
  parallel_over_reps(replications, pool,
                     [&](std::uint64_t begin, std::uint64_t end, int slot) {
                       std::vector<std::uint32_t> counts(kChunk);
                       std::uint64_t wins = 0;
                       for (std::uint64_t at = begin; at < end; at += kChunk) {
                         const std::uint64_t stop = std::min(end, at + kChunk);
                         kernel(seed, at, stop, static_cast<std::uint32_t>(threshold),
                                static_cast<std::uint32_t>(n), cutoffs.data(), counts.data());
                         for (std::uint64_t i = 0; i < stop - at; ++i)
                           wins += counts[i] == static_cast<std::uint32_t>(m);
                       }
                       wins_by_worker[static_cast<std::size_t>(slot)] = wins;
                     });

  SimulationReport report;
  report.rule = label;
  report.m = m;
  report.threshold = threshold;
  report.replications = replications;
  for (std::uint64_t w : wins_by_worker) report.wins += w;
  report.empirical_rate = static_cast<double>(report.wins) / static_cast<double>(replications);
  report.std_error = std_error_of(report.empirical_rate, replications);
  report.seed = seed;
  return report;
}

double PairedSimulation::difference() const {
  return odds.empirical_rate - mean.empirical_rate;
}

double PairedSimulation::paired_std_error() const {
  // Per-replication difference is +1 on odds-only wins, -1 on mean-only wins.
  const double reps = static_cast<double>(odds.replications);
  const double mean_diff = (static_cast<double>(odds_only) - static_cast<double>(mean_only)) / reps;
  const double mean_sq = (static_cast<double>(odds_only) + static_cast<double>(mean_only)) / reps;
  const double variance = std::max(0.0, mean_sq - mean_diff * mean_diff);
  return std::sqrt(variance / reps);
}

PairedSimulation simulate_compare(const SuccessProfile& profile, int m,
                                  std::uint64_t replications, std::uint64_t seed,
                                  int workers) {
  if (replications < 1) throw ValidationError("replications must be at least 1");
  const int n = profile.size();
  const ThresholdResult odds_rule = odds_threshold(profile, m);
  const ThresholdResult mean_rule = mean_threshold(profile, m);
  const int lo = std::min(odds_rule.threshold, mean_rule.threshold);
  const int hi = std::max(odds_rule.threshold, mean_rule.threshold);

  // Common random numbers: each trial draw is keyed by (seed, rep, trial),
  // so both rules see identical trials. Counts over [hi, n] come from the
  // full range minus the [lo, hi) prefix.
  const auto cutoffs = bernoulli_cutoffs(profile, lo, n);
  const auto kernel = kernels::active_dispatch().suffix_count;
  const int pool = resolve_workers(workers, replications);

  struct Tally {
    std::uint64_t both = 0, lo_only = 0, hi_only = 0;
  };
  std::vector<Tally> tallies(static_cast<std::size_t>(pool));

  parallel_over_reps(
      replications, pool, [&](std::uint64_t begin, std::uint64_t end, int slot) {
        std::vector<std::uint32_t> full(kChunk), prefix(kChunk);
        Tally tally;
        for (std::uint64_t at = begin; at < end; at += kChunk) {
          const std::uint64_t stop = std::min(end, at + kChunk);
          kernel(seed, at, stop, static_cast<std::uint32_t>(lo),
                 static_cast<std::uint32_t>(n), cutoffs.data(), full.data());
          kernel(seed, at, stop, static_cast<std::uint32_t>(lo),
                 static_cast<std::uint32_t>(hi - 1), cutoffs.data(), prefix.data());
          for (std::uint64_t i = 0; i < stop - at; ++i) {
            const bool lo_win = full[i] == static_cast<std::uint32_t>(m);
            const bool hi_win = full[i] - prefix[i] == static_cast<std::uint32_t>(m);
            tally.both += lo_win && hi_win;
            tally.lo_only += lo_win && !hi_win;
            tally.hi_only += hi_win && !lo_win;
          }
        }
        tallies[static_cast<std::size_t>(slot)] = tally;
      });

  Tally total;
  for (const Tally& t : tallies) {
    total.both += t.both;
    total.lo_only += t.lo_only;
    total.hi_only += t.hi_only;
  }

  const bool odds_is_lo = odds_rule.threshold == lo;
  const std::uint64_t odds_wins = total.both + (odds_is_lo ? total.lo_only : total.hi_only);
  const std::uint64_t mean_wins = total.both + (odds_is_lo ? total.hi_only : total.lo_only);

  PairedSimulation paired;
  paired.both_win = total.both;
  paired.odds_only = odds_is_lo ? total.lo_only : total.hi_only;
  paired.mean_only = odds_is_lo ? total.hi_only : total.lo_only;

  auto fill = [&](Rule label, const ThresholdResult& rule, std::uint64_t wins) {
    SimulationReport report;
    report.rule = label;
    report.m = m;
    report.threshold = rule.threshold;
    report.replications = replications;
    report.wins = wins;
    report.empirical_rate = static_cast<double>(wins) / static_cast<double>(replications);
    report.std_error = std_error_of(report.empirical_rate, replications);
    report.seed = seed;
    return report;
  };
  paired.odds = fill(Rule::Odds, odds_rule, odds_wins);
  paired.mean = fill(Rule::Mean, mean_rule, mean_wins);
  return paired;
}

}  // namespace laststop
