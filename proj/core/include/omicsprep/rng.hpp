#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace omicsprep {

/// Philox4x32-10 block function: maps a 128-bit counter under a 64-bit key to
/// 128 random bits. Stateless, so any draw can be recomputed from its index.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// A random-access stream of draws identified by (seed, stream id).
///
/// Draw k of the stream is a pure function of (seed, stream, k); streams are
/// independent for distinct ids. This is what makes parallel simulation
/// results independent of scheduling.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  /// Two 64-bit words for block `index`.
  std::array<std::uint64_t, 2> bits(std::uint64_t index) const noexcept;

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform(std::uint64_t index) const noexcept;

  /// Standard normal draw; Box-Muller on block index / 2, taking the cosine
  /// branch for even indices and the sine branch for odd ones.
  double normal(std::uint64_t index) const noexcept;

  std::uint64_t stream() const noexcept { return stream_; }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
};

/// Sequential engine over a CounterStream, usable with <random> adaptors.
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  explicit PhiloxEngine(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : stream_(seed, stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on (0, 1).
  double uniform() noexcept;
  /// Standard normal (Box-Muller, cosine branch, two words per draw).
  double normal() noexcept;

  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  CounterStream stream_;
  std::uint64_t next_block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

/// Stable 64-bit hash of a label (FNV-1a followed by a splitmix finaliser).
std::uint64_t hash_label(std::string_view label) noexcept;

/// splitmix64 finaliser; combines stream coordinates into one id.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace omicsprep
