#pragma once

#include <array>
#include <cstdint>

namespace laststop::kernels {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11; the Random123
// family). A 128-bit counter and a 64-bit key map to four 32-bit words.
// Being a pure function of (key, counter) it gives replayable, order-independent
// streams: exactly what the simulator's determinism contract needs.
struct Philox4x32 {
  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr int kRounds = 10;

  static std::array<std::uint32_t, 4> generate(std::uint64_t key, std::uint32_t c0,
                                               std::uint32_t c1, std::uint32_t c2,
                                               std::uint32_t c3) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    std::uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    for (int round = 0; round < kRounds; ++round) {
      const std::uint64_t prod0 = static_cast<std::uint64_t>(kMult0) * x0;
      const std::uint64_t prod1 = static_cast<std::uint64_t>(kMult1) * x2;
      const std::uint32_t lo0 = static_cast<std::uint32_t>(prod0);
      const std::uint32_t hi0 = static_cast<std::uint32_t>(prod0 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(prod1);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(prod1 >> 32);
      x0 = hi1 ^ x1 ^ k0;
      x1 = lo1;
      x2 = hi0 ^ x3 ^ k1;
      x3 = lo0;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {x0, x1, x2, x3};
  }

  // Draws for one replication block: counter = (block lo32, block hi32, trial, 0).
  // Word w of the result belongs to replication 4 * block + w.
  static std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t rep_block,
                                            std::uint32_t trial) {
    return generate(seed, static_cast<std::uint32_t>(rep_block),
                    static_cast<std::uint32_t>(rep_block >> 32), trial, 0u);
  }
};

}  // namespace laststop::kernels
