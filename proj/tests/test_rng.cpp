#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "irsim/rng.hpp"

using irsim::CounterRng;
using irsim::Philox4x32;
using irsim::Stream;

TEST_CASE("philox known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                             K{0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             K{0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("draws are a pure function of seed, stream and index") {
  CounterRng a(42, Stream::slot, 7);
  CounterRng b(42, Stream::slot, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u32() == b.next_u32());

  auto first = [](std::uint64_t seed, Stream s, std::uint64_t idx) {
    CounterRng r(seed, s, idx);
    return r.next_u64();
  };
  CHECK(first(42, Stream::slot, 7) != first(42, Stream::slot, 8));
  CHECK(first(42, Stream::slot, 7) != first(42, Stream::outage, 7));
  CHECK(first(42, Stream::slot, 7) != first(43, Stream::slot, 7));
  CHECK(first(42, Stream::slot, 1ULL << 40) != first(42, Stream::slot, 0));
}

TEST_CASE("uniform lies in [0, 1) with the right moments") {
  CounterRng r(1, Stream::test, 0);
  const int n = 1'000'000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  // Standard errors: 0.289 / 1000 and 0.298 / 1000.
  CHECK(std::abs(sum / n - 0.5) < 1.5e-3);
  CHECK(std::abs(sum_sq / n - 1.0 / 3.0) < 1.5e-3);
}

TEST_CASE("uniform_index is unbiased for awkward ranges") {
  for (std::uint64_t range : {1ULL, 3ULL, 7ULL, 10ULL}) {
    CAPTURE(range);
    CounterRng r(2, Stream::test, range);
    const int n = 200'000;
    std::vector<int> counts(range, 0);
    for (int i = 0; i < n; ++i) {
      const auto v = r.uniform_index(range);
      REQUIRE(v < range);
      ++counts[v];
    }
    const double p = 1.0 / static_cast<double>(range);
    const double sd = std::sqrt(n * p * (1 - p));
    for (int c : counts) CHECK(std::abs(c - n * p) <= 4.0 * sd + 1e-9);
  }
}

TEST_CASE("normal and complex normal moments") {
  CounterRng r(3, Stream::test, 0);
  const int n = 1'000'000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s1 / n) < 5e-3);
  CHECK(std::abs(s2 / n - 1.0) < 7e-3);
  CHECK(std::abs(s4 / n - 3.0) < 0.06);

  CounterRng c(4, Stream::test, 0);
  double re2 = 0.0, im2 = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = c.complex_normal(2.5);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  CHECK(std::abs(re2 / n - 1.25) < 0.01);
  CHECK(std::abs(im2 / n - 1.25) < 0.01);
  CHECK(std::abs(cross / n) < 0.01);
}

TEST_CASE("uniform_phase covers [0, 2 pi)") {
  CounterRng r(5, Stream::test, 0);
  double lo = 10.0, hi = -1.0;
  for (int i = 0; i < 100'000; ++i) {
    const double a = r.uniform_phase();
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  CHECK(lo >= 0.0);
  CHECK(lo < 1e-3);
  CHECK(hi < 2.0 * std::numbers::pi);
  CHECK(hi > 2.0 * std::numbers::pi - 1e-3);
}

TEST_CASE("works as a standard uniform random bit generator") {
  static_assert(CounterRng::min() == 0);
  CounterRng a(9, Stream::test, 1);
  CounterRng b(9, Stream::test, 1);
  CHECK(a() == b.next_u32());
}
