#pragma once

// Hand-rolled generators for property tests. Case i of a property always sees
// the same inputs, so a failure report names a reproducible case.

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include <doctest.h>

#include "irsim/kernels.hpp"
#include "irsim/rng.hpp"

namespace irsim::test {

class Gen {
 public:
  Gen(std::uint64_t property, std::uint64_t case_index)
      : rng_(property, Stream::test, case_index) {}

  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng_.uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  double real(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  double log_uniform(double lo, double hi);
  std::complex<double> complex(double var = 1.0) { return rng_.complex_normal(var); }
  int pick(std::initializer_list<int> values) {
    return *(values.begin() + integer(0, static_cast<int>(values.size()) - 1));
  }
  SplitComplex split_complex(std::size_t n) {
    SplitComplex z(n);
    for (std::size_t i = 0; i < n; ++i) z.set(i, complex());
    return z;
  }
  CounterRng& rng() { return rng_; }

 private:
  CounterRng rng_;
};

inline double Gen::log_uniform(double lo, double hi) {
  return lo * std::pow(hi / lo, rng_.uniform());
}

/// Runs `body(gen)` for `cases` generated cases of property `property`.
template <class Body>
void for_all(std::uint64_t property, int cases, Body body) {
  for (int i = 0; i < cases; ++i) {
    CAPTURE(i);
    Gen gen(property, static_cast<std::uint64_t>(i));
    body(gen);
  }
}

}  // namespace irsim::test
