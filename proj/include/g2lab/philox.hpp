#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace g2lab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A (key, counter) pair maps to four 32-bit words with no hidden state,
/// so realization r of a run with seed s can be regenerated on any thread.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  static constexpr Key key_from_seed(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Substream identifiers: one independent sequence per (realization, purpose).
enum class Stream : std::uint32_t {
  source_field = 0,
  shot_noise_1 = 1,
  shot_noise_2 = 2,
};

/// Sequential view of one substream, usable as a UniformRandomBitGenerator.
/// Counter layout: {block, stream, realization_lo, realization_hi}.
class PhiloxStream {
 public:
  using result_type = std::uint32_t;

  PhiloxStream(std::uint64_t seed, std::uint64_t realization, Stream stream) noexcept
      : key_(Philox4x32::key_from_seed(seed)),
        stream_(static_cast<std::uint32_t>(stream)),
        realization_(realization) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (used_ == 4) refill();
    return buffer_[used_++];
  }

  /// Words 4*i .. 4*i+3 of this substream, independent of call history.
  Philox4x32::Counter block_at(std::uint32_t i) const noexcept {
    return Philox4x32::block({i, stream_, static_cast<std::uint32_t>(realization_),
                              static_cast<std::uint32_t>(realization_ >> 32)},
                             key_);
  }

 private:
  void refill() noexcept {
    buffer_ = block_at(next_block_++);
    used_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint64_t realization_;
  std::uint32_t next_block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// Uniform double in (0, 1) from the top 52 of 64 random bits; never
/// returns 0 or 1. With 53 bits the largest value would round up to 1.
inline double open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

}  // namespace g2lab
