#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

namespace irsim {

/// Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept;
};

/// Stream labels. Every consumer of randomness draws from its own label so
/// that adding draws to one experiment never perturbs another.
enum class Stream : std::uint32_t {
  topology = 1,
  slot = 2,
  outage = 3,
  alignment = 4,
  terms = 5,
  phases = 6,
  validate = 7,
  test = 0x7e57,
};

/**
 * Random source whose every output is a pure function of
 * (seed, stream, index, draw number).
 *
 * The Philox key holds the 64-bit seed; the 128-bit counter holds the draw
 * block, the stream label and the 64-bit index (slot or trial number).
 * Instances are cheap values: a worker constructs one per slot and never
 * shares it.
 */
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept;
  CounterRng(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept { return next_u32(); }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer on [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;
  /// Uniform phase on [0, 2*pi).
  double uniform_phase() noexcept;
  /// Standard normal (Box-Muller, second variate cached).
  double normal() noexcept;
  /// Circular complex normal CN(0, variance): each component N(0, variance/2).
  std::complex<double> complex_normal(double variance) noexcept;

  std::uint64_t blocks_used() const noexcept { return block_; }

 private:
  void refill() noexcept;

  Philox4x32::Key key_{};
  std::uint32_t stream_ = 0;
  std::uint64_t index_ = 0;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int cursor_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace irsim
