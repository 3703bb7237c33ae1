#include "laststop/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "laststop/kernels/philox.hpp"

namespace laststop::kernels {

namespace scalar {

void suffix_count(std::uint64_t seed, std::uint64_t rep_begin, std::uint64_t rep_end,
                  std::uint32_t trial_lo, std::uint32_t trial_hi,
                  const std::uint64_t* cutoffs, std::uint32_t* counts) {
  std::uint64_t rep = rep_begin;
  while (rep < rep_end) {
    const std::uint64_t block = rep >> 2;
    const unsigned first_word = static_cast<unsigned>(rep & 3);
    const unsigned words =
        static_cast<unsigned>(std::min<std::uint64_t>(4 - first_word, rep_end - rep));
    std::uint32_t tally[4] = {0, 0, 0, 0};
    for (std::uint32_t t = trial_lo; t <= trial_hi; ++t) {
      const auto draw = Philox4x32::block(seed, block, t);
      const std::uint64_t cutoff = cutoffs[t - trial_lo];
      for (unsigned w = first_word; w < first_word + words; ++w)
        tally[w] += static_cast<std::uint64_t>(draw[w]) < cutoff;
    }
    for (unsigned w = 0; w < words; ++w)
      counts[(rep - rep_begin) + w] = tally[first_word + w];
    rep += words;
  }
}

void convolve_step(double p, double* mass, std::size_t count) {
  const double q = 1.0 - p;
  for (std::size_t j = count; j >= 1; --j)
    mass[j] = std::fma(p, mass[j - 1], q * mass[j]);
  mass[0] = q * mass[0];
}

}  // namespace scalar

#if defined(LASTSTOP_WITH_AVX2)
namespace avx2 {
// Defined in kernels_avx2.cpp.
void suffix_count(std::uint64_t seed, std::uint64_t rep_begin, std::uint64_t rep_end,
                  std::uint32_t trial_lo, std::uint32_t trial_hi,
                  const std::uint64_t* cutoffs, std::uint32_t* counts);
void convolve_step(double p, double* mass, std::size_t count);
}  // namespace avx2

namespace {
bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
}  // namespace
#endif

// TODO: NEON variants for aarch64 builds.

Dispatch scalar_dispatch() {
  return Dispatch{&scalar::suffix_count, &scalar::convolve_step, "scalar"};
}

Dispatch avx2_dispatch() {
#if defined(LASTSTOP_WITH_AVX2)
  if (avx2_supported()) return Dispatch{&avx2::suffix_count, &avx2::convolve_step, "avx2"};
#endif
  return Dispatch{nullptr, nullptr, "unavailable"};
}

const Dispatch& active_dispatch() {
  static const Dispatch chosen = [] {
    Dispatch d = avx2_dispatch();
    if (d.suffix_count != nullptr) return d;
    return scalar_dispatch();
  }();
  return chosen;
}

}  // namespace laststop::kernels
