#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace dpplimits {

/// Counter-based generator (Philox4x32-10) keyed by a 64-bit seed and a
/// 64-bit stream id. The stream id occupies the upper half of the counter,
/// so two streams never share a block and the i-th draw of a stream does not
/// depend on any other stream's usage.
///
/// Satisfies UniformRandomBitGenerator. The helper distributions below are
/// implemented here rather than through <random> so that draw sequences are
/// identical across standard library implementations.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  SeededRng(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;
  /// Uniform integer in [0, bound), bound > 0 (Lemire's rejection method).
  std::uint64_t below(std::uint64_t bound) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

namespace detail {
/// The raw Philox4x32-10 block function (exposed for known-answer tests).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;
}  // namespace detail

/// Deterministically combine tags (experiment id, replicate index, ...) into
/// one stream id.
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> tags) noexcept;

}  // namespace dpplimits
