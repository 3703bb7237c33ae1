#pragma once

#include <cstddef>
#include <cstdint>

namespace laststop::kernels {

// Per-replication Bernoulli success counts over a trial range.
//
// For replication r and trial t the uniform draw is word (r & 3) of
// Philox4x32::block(seed, r >> 2, t); the trial succeeds when the draw,
// widened to 64 bits, is below cutoffs[t - trial_lo]. Cutoffs are
// round(p * 2^32), so p quantizes to a 2^-32 grid and p = 1 maps to 2^32
// (always succeeds). counts[r - rep_begin] receives the number of successes
// among trials trial_lo..trial_hi inclusive; an empty range (trial_hi <
// trial_lo) yields zeros. The result depends only on (seed, r, t), never on
// how the replication range is chunked.
using SuffixCountFn = void (*)(std::uint64_t seed, std::uint64_t rep_begin,
                               std::uint64_t rep_end, std::uint32_t trial_lo,
                               std::uint32_t trial_hi, const std::uint64_t* cutoffs,
                               std::uint32_t* counts);

// One backward-convolution step that prepends a trial with success
// probability p to a truncated Poisson-binomial mass vector:
//
//   mass[j] <- fma(p, mass[j-1], (1 - p) * mass[j])   for j = count..1,
//   mass[0] <- (1 - p) * mass[0].
//
// The caller folds p * mass[count] into its overflow accumulator *before*
// the call. Every variant performs the identical fma/multiply per element,
// so results are bit-identical across implementations.
using ConvolveStepFn = void (*)(double p, double* mass, std::size_t count);

struct Dispatch {
  SuffixCountFn suffix_count = nullptr;
  ConvolveStepFn convolve_step = nullptr;
  const char* name = "";
};

// Best implementation for this machine, chosen once at startup.
const Dispatch& active_dispatch();

// Individual variants, exposed for equivalence tests and benchmarks.
// avx2_dispatch() has null function pointers when the AVX2 translation unit
// was not built or the CPU lacks AVX2/FMA.
Dispatch scalar_dispatch();
Dispatch avx2_dispatch();

namespace scalar {
void suffix_count(std::uint64_t seed, std::uint64_t rep_begin, std::uint64_t rep_end,
                  std::uint32_t trial_lo, std::uint32_t trial_hi,
                  const std::uint64_t* cutoffs, std::uint32_t* counts);
void convolve_step(double p, double* mass, std::size_t count);
}  // namespace scalar

}  // namespace laststop::kernels
