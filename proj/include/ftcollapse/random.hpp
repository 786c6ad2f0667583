#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ftcollapse {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output
/// for a given (key, counter) is a pure function, which is what makes per-path
/// streams independent of scheduling.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85;
};

/// Independent substreams drawn within one path.
enum class StreamPurpose : std::uint32_t {
  kBrownian = 1,
  kBridge = 2,
  kTerminalLevel = 3,
  kTest = 0xFFFF,
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

/// Sequential view over the Philox blocks of one (seed, path, purpose)
/// triple. Counter layout: [block, purpose, path lo, path hi], key = seed.
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint32_t;

  RandomStream(SeedSpec seed, StreamPurpose purpose) noexcept
      : key_{static_cast<std::uint32_t>(seed.master_seed),
             static_cast<std::uint32_t>(seed.master_seed >> 32)},
        purpose_(static_cast<std::uint32_t>(purpose)),
        path_lo_(static_cast<std::uint32_t>(seed.path_index)),
        path_hi_(static_cast<std::uint32_t>(seed.path_index >> 32)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (word_ == 4) refill();
    return buffer_[word_++];
  }

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    const std::uint64_t hi = (*this)() >> 5;  // 27 bits
    const std::uint64_t lo = (*this)() >> 6;  // 26 bits
    const std::uint64_t bits = (hi << 26) | lo;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;

 private:
  void refill() noexcept {
    buffer_ = Philox4x32::generate({block_, purpose_, path_lo_, path_hi_}, key_);
    ++block_;
    word_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t purpose_;
  std::uint32_t path_lo_;
  std::uint32_t path_hi_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int word_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ftcollapse
