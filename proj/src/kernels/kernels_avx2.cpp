// AVX2 + FMA variants. Eight Philox blocks (32 replications) advance in
// lockstep; the convolution step mirrors the scalar fma sequence exactly, so
// both kernels are bit-identical to their scalar references.

#include <immintrin.h>

#include <algorithm>
#include <cstdint>

#include "laststop/kernels/kernels.hpp"
#include "laststop/kernels/philox.hpp"

namespace laststop::kernels::avx2 {

namespace {

// 32x32 -> 64 multiply of every 32-bit lane against a broadcast constant,
// split into low and high halves. _mm256_mul_epu32 only covers the even
// lanes, so odd lanes go through a shifted second multiply.
struct MulHiLo {
  __m256i lo;
  __m256i hi;
};

inline MulHiLo mul_hi_lo(__m256i x, __m256i mult) {
  const __m256i even = _mm256_mul_epu32(x, mult);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), mult);
  MulHiLo out;
  out.lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
  out.hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
  return out;
}

struct PhiloxState {
  __m256i x0, x1, x2, x3;
};

inline PhiloxState philox8(std::uint64_t seed, __m256i ctr_lo, __m256i ctr_hi,
                           std::uint32_t trial) {
  const __m256i mult0 = _mm256_set1_epi32(static_cast<int>(Philox4x32::kMult0));
  const __m256i mult1 = _mm256_set1_epi32(static_cast<int>(Philox4x32::kMult1));
  __m256i k0 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(seed)));
  __m256i k1 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(seed >> 32)));
  const __m256i weyl0 = _mm256_set1_epi32(static_cast<int>(Philox4x32::kWeyl0));
  const __m256i weyl1 = _mm256_set1_epi32(static_cast<int>(Philox4x32::kWeyl1));

  PhiloxState s;
  s.x0 = ctr_lo;
  s.x1 = ctr_hi;
  s.x2 = _mm256_set1_epi32(static_cast<int>(trial));
  s.x3 = _mm256_setzero_si256();
  for (int round = 0; round < Philox4x32::kRounds; ++round) {
    const MulHiLo m0 = mul_hi_lo(s.x0, mult0);
    const MulHiLo m1 = mul_hi_lo(s.x2, mult1);
    const __m256i y0 = _mm256_xor_si256(_mm256_xor_si256(m1.hi, s.x1), k0);
    const __m256i y2 = _mm256_xor_si256(_mm256_xor_si256(m0.hi, s.x3), k1);
    s.x0 = y0;
    s.x1 = m1.lo;
    s.x2 = y2;
    s.x3 = m0.lo;
    k0 = _mm256_add_epi32(k0, weyl0);
    k1 = _mm256_add_epi32(k1, weyl1);
  }
  return s;
}

// draw < cutoff as an unsigned 32-bit compare (bias both into signed range).
inline __m256i below_cutoff(__m256i draw, __m256i cutoff_biased, __m256i bias) {
  return _mm256_cmpgt_epi32(cutoff_biased, _mm256_xor_si256(draw, bias));
}

}  // namespace

void suffix_count(std::uint64_t seed, std::uint64_t rep_begin, std::uint64_t rep_end,
                  std::uint32_t trial_lo, std::uint32_t trial_hi,
                  const std::uint64_t* cutoffs, std::uint32_t* counts) {
  std::uint64_t rep = rep_begin;

  // Head: align to a 4-replication Philox block boundary.
  if (rep & 3) {
    const std::uint64_t head_end = std::min(rep_end, (rep & ~std::uint64_t{3}) + 4);
    scalar::suffix_count(seed, rep, head_end, trial_lo, trial_hi, cutoffs,
                         counts + (rep - rep_begin));
    rep = head_end;
  }

  const __m256i bias = _mm256_set1_epi32(static_cast<int>(0x80000000u));
  const __m256i lane_offsets = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);

  // Main: groups of eight blocks = 32 replications.
  while (rep + 32 <= rep_end) {
    const std::uint64_t block = rep >> 2;
    const __m256i base_lo = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(block)));
    __m256i ctr_lo = _mm256_add_epi32(base_lo, lane_offsets);
    // Lane i holds block + i; carry into the high half only when the low
    // word wrapped (unsigned compare against the base).
    const __m256i wrapped =
        _mm256_cmpgt_epi32(_mm256_xor_si256(base_lo, bias), _mm256_xor_si256(ctr_lo, bias));
    __m256i ctr_hi = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(block >> 32)));
    ctr_hi = _mm256_sub_epi32(ctr_hi, wrapped);

    __m256i tally[4];
    for (auto& t : tally) t = _mm256_setzero_si256();

    for (std::uint32_t t = trial_lo; t <= trial_hi; ++t) {
      const std::uint64_t cutoff = cutoffs[t - trial_lo];
      const PhiloxState draw = philox8(seed, ctr_lo, ctr_hi, t);
      if (cutoff > 0xFFFFFFFFull) {
        const __m256i one = _mm256_set1_epi32(1);
        for (auto& lane : tally) lane = _mm256_add_epi32(lane, one);
      } else {
        const __m256i cut =
            _mm256_xor_si256(_mm256_set1_epi32(static_cast<int>(cutoff)), bias);
        tally[0] = _mm256_sub_epi32(tally[0], below_cutoff(draw.x0, cut, bias));
        tally[1] = _mm256_sub_epi32(tally[1], below_cutoff(draw.x1, cut, bias));
        tally[2] = _mm256_sub_epi32(tally[2], below_cutoff(draw.x2, cut, bias));
        tally[3] = _mm256_sub_epi32(tally[3], below_cutoff(draw.x3, cut, bias));
      }
    }

    // tally[w] lane i belongs to replication 4 (block + i) + w.
    alignas(32) std::uint32_t spill[4][8];
    for (int w = 0; w < 4; ++w)
      _mm256_store_si256(reinterpret_cast<__m256i*>(spill[w]), tally[w]);
    std::uint32_t* out = counts + (rep - rep_begin);
    for (int i = 0; i < 8; ++i)
      for (int w = 0; w < 4; ++w) out[4 * i + w] = spill[w][i];

    rep += 32;
  }

  // Tail.
  if (rep < rep_end)
    scalar::suffix_count(seed, rep, rep_end, trial_lo, trial_hi, cutoffs,
                         counts + (rep - rep_begin));
}

void convolve_step(double p, double* mass, std::size_t count) {
  const double q = 1.0 - p;
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vq = _mm256_set1_pd(q);
  std::size_t j = count;
  // Descending blocks of four; each block reads mass[j-4..j] before any of
  // those slots is rewritten, matching the scalar order exactly.
  while (j >= 4) {
    const __m256d cur = _mm256_loadu_pd(mass + j - 3);
    const __m256d prev = _mm256_loadu_pd(mass + j - 4);
    _mm256_storeu_pd(mass + j - 3, _mm256_fmadd_pd(vp, prev, _mm256_mul_pd(vq, cur)));
    j -= 4;
  }
  for (; j >= 1; --j) mass[j] = __builtin_fma(p, mass[j - 1], q * mass[j]);
  mass[0] = q * mass[0];
}

}  // namespace laststop::kernels::avx2
