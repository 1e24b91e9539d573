#pragma once

// Data-parallel inner loops on split (structure-of-arrays) complex vectors.
//
// Every kernel has a scalar reference implementation; an AVX2/FMA variant is
// compiled when IRSIM_HAVE_AVX2 is set and picked at runtime if the CPU
// supports it. The variants agree to rounding (summation order differs), which
// tests/test_kernels.cpp checks.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace irsim {

/// Complex vector stored as separate real and imaginary arrays.
struct SplitComplex {
  std::vector<double> re;
  std::vector<double> im;

  SplitComplex() = default;
  explicit SplitComplex(std::size_t n) : re(n, 0.0), im(n, 0.0) {}

  std::size_t size() const noexcept { return re.size(); }
  std::complex<double> operator[](std::size_t i) const { return {re[i], im[i]}; }
  void set(std::size_t i, std::complex<double> z) {
    re[i] = z.real();
    im[i] = z.imag();
  }
};

namespace kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the variant was compiled in and the CPU can execute it.
bool isa_available(Isa isa) noexcept;

/// Currently dispatched variant. Defaults to the best available one.
Isa active_isa() noexcept;

/// Forces a variant (tests, reproducibility across machines). Returns false
/// and leaves the selection unchanged if the variant is unavailable.
bool select_isa(Isa isa) noexcept;

/// sum_i conj(a_i) * b_i
std::complex<double> dot_conj(std::span<const double> a_re, std::span<const double> a_im,
                              std::span<const double> b_re, std::span<const double> b_im);

/// sum_i |z_i|
double abs_sum(std::span<const double> re, std::span<const double> im);

/// out_i = c * a_i
void scale(std::complex<double> c, std::span<const double> a_re, std::span<const double> a_im,
           std::span<double> out_re, std::span<double> out_im);

inline std::complex<double> dot_conj(const SplitComplex& a, const SplitComplex& b) {
  return dot_conj(a.re, a.im, b.re, b.im);
}
inline double abs_sum(const SplitComplex& z) { return abs_sum(z.re, z.im); }

namespace scalar {
std::complex<double> dot_conj(const double* a_re, const double* a_im, const double* b_re,
                              const double* b_im, std::size_t n) noexcept;
double abs_sum(const double* re, const double* im, std::size_t n) noexcept;
void scale(double c_re, double c_im, const double* a_re, const double* a_im, double* out_re,
           double* out_im, std::size_t n) noexcept;
}  // namespace scalar

#ifdef IRSIM_HAVE_AVX2
namespace avx2 {
std::complex<double> dot_conj(const double* a_re, const double* a_im, const double* b_re,
                              const double* b_im, std::size_t n) noexcept;
double abs_sum(const double* re, const double* im, std::size_t n) noexcept;
void scale(double c_re, double c_im, const double* a_re, const double* a_im, double* out_re,
           double* out_im, std::size_t n) noexcept;
}  // namespace avx2
#endif

}  // namespace kernels
}  // namespace irsim
