#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "irsim/kernels.hpp"
#include "support.hpp"

using irsim::SplitComplex;
using irsim::test::for_all;
using irsim::test::Gen;
namespace kernels = irsim::kernels;

namespace {

struct IsaGuard {
  kernels::Isa saved = kernels::active_isa();
  ~IsaGuard() { kernels::select_isa(saved); }
};

double abs_sum_reference(const SplitComplex& z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) acc += std::abs(z[i]);
  return acc;
}

}  // namespace

TEST_CASE("scalar kernels on small known inputs") {
  SplitComplex a(2), b(2);
  a.set(0, {1.0, 1.0});
  a.set(1, {0.0, 2.0});
  b.set(0, {2.0, 0.0});
  b.set(1, {1.0, 1.0});
  // conj(1+j)*2 + conj(2j)*(1+j) = (2-2j) + (2-2j)
  const auto d = kernels::scalar::dot_conj(a.re.data(), a.im.data(), b.re.data(), b.im.data(), 2);
  CHECK(d.real() == 4.0);
  CHECK(d.imag() == -4.0);
  SplitComplex e(1);
  e.set(0, {3.0, 4.0});
  CHECK(kernels::scalar::abs_sum(e.re.data(), e.im.data(), 1) == 5.0);
  CHECK(kernels::scalar::dot_conj(nullptr, nullptr, nullptr, nullptr, 0) == std::complex<double>{});
}

TEST_CASE("dispatched kernels check sizes") {
  SplitComplex a(3), b(4);
  CHECK_THROWS_AS(kernels::dot_conj(a, b), std::invalid_argument);
  std::vector<double> re(3), im(2);
  CHECK_THROWS_AS(kernels::abs_sum(re, im), std::invalid_argument);
  std::vector<double> out_re(3), out_im(4);
  CHECK_THROWS_AS(kernels::scale({1.0, 0.0}, a.re, a.im, out_re, out_im), std::invalid_argument);
}

TEST_CASE("scalar variant is always selectable") {
  IsaGuard guard;
  CHECK(kernels::isa_available(kernels::Isa::scalar));
  CHECK(kernels::select_isa(kernels::Isa::scalar));
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  CHECK(kernels::isa_name(kernels::Isa::scalar) == "scalar");
  CHECK(kernels::isa_name(kernels::Isa::avx2) == "avx2");
}

TEST_CASE("property: dispatched kernels match straightforward loops") {
  IsaGuard guard;
  for (kernels::Isa isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
    if (!kernels::select_isa(isa)) continue;
    CAPTURE(kernels::isa_name(isa));
    for_all(0x6b01, 200, [](Gen& g) {
      const auto n = static_cast<std::size_t>(g.integer(0, 70));
      const SplitComplex a = g.split_complex(n);
      const SplitComplex b = g.split_complex(n);
      std::complex<double> ref = 0.0;
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ref += std::conj(a[i]) * b[i];
        mag += std::abs(a[i]) * std::abs(b[i]);
      }
      CHECK(std::abs(kernels::dot_conj(a, b) - ref) <= 1e-13 * (1.0 + mag));
      const double s = abs_sum_reference(a);
      CHECK(std::abs(kernels::abs_sum(a) - s) <= 1e-13 * (1.0 + s));

      const std::complex<double> c = g.complex();
      SplitComplex out(n);
      kernels::scale(c, a.re, a.im, out.re, out.im);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(out[i] - c * a[i]) <= 1e-14 * (1.0 + std::abs(c * a[i])));
    });
  }
}

#ifdef IRSIM_HAVE_AVX2
TEST_CASE("property: avx2 variants agree with the scalar reference") {
  if (!kernels::isa_available(kernels::Isa::avx2)) {
    MESSAGE("CPU lacks AVX2/FMA; equivalence not exercised");
    return;
  }
  for_all(0x6b02, 500, [](Gen& g) {
    // Lengths straddle the 4-wide vector body and its tail.
    const auto n = static_cast<std::size_t>(g.integer(0, 131));
    const SplitComplex a = g.split_complex(n);
    const SplitComplex b = g.split_complex(n);

    const auto ds = kernels::scalar::dot_conj(a.re.data(), a.im.data(), b.re.data(), b.im.data(), n);
    const auto dv = kernels::avx2::dot_conj(a.re.data(), a.im.data(), b.re.data(), b.im.data(), n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i]) * std::abs(b[i]);
    CHECK(std::abs(ds - dv) <= 1e-13 * (1.0 + mag));

    const double ss = kernels::scalar::abs_sum(a.re.data(), a.im.data(), n);
    const double sv = kernels::avx2::abs_sum(a.re.data(), a.im.data(), n);
    CHECK(std::abs(ss - sv) <= 1e-13 * (1.0 + ss));

    const std::complex<double> c = g.complex();
    SplitComplex os(n), ov(n);
    kernels::scalar::scale(c.real(), c.imag(), a.re.data(), a.im.data(), os.re.data(), os.im.data(), n);
    kernels::avx2::scale(c.real(), c.imag(), a.re.data(), a.im.data(), ov.re.data(), ov.im.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(os[i] - ov[i]) <= 1e-15 * (1.0 + std::abs(os[i])));
  });
}
#endif
