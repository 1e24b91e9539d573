// Compiled with -mavx2 -mfma; only called after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "irsim/kernels.hpp"

namespace irsim::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

std::complex<double> dot_conj(const double* a_re, const double* a_im, const double* b_re,
                              const double* b_im, std::size_t n) noexcept {
  __m256d acc_re0 = _mm256_setzero_pd();
  __m256d acc_im0 = _mm256_setzero_pd();
  __m256d acc_re1 = _mm256_setzero_pd();
  __m256d acc_im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d ar0 = _mm256_loadu_pd(a_re + i);
    const __m256d ai0 = _mm256_loadu_pd(a_im + i);
    const __m256d br0 = _mm256_loadu_pd(b_re + i);
    const __m256d bi0 = _mm256_loadu_pd(b_im + i);
    const __m256d ar1 = _mm256_loadu_pd(a_re + i + 4);
    const __m256d ai1 = _mm256_loadu_pd(a_im + i + 4);
    const __m256d br1 = _mm256_loadu_pd(b_re + i + 4);
    const __m256d bi1 = _mm256_loadu_pd(b_im + i + 4);
    acc_re0 = _mm256_fmadd_pd(ar0, br0, acc_re0);
    acc_re0 = _mm256_fmadd_pd(ai0, bi0, acc_re0);
    acc_im0 = _mm256_fmadd_pd(ar0, bi0, acc_im0);
    acc_im0 = _mm256_fnmadd_pd(ai0, br0, acc_im0);
    acc_re1 = _mm256_fmadd_pd(ar1, br1, acc_re1);
    acc_re1 = _mm256_fmadd_pd(ai1, bi1, acc_re1);
    acc_im1 = _mm256_fmadd_pd(ar1, bi1, acc_im1);
    acc_im1 = _mm256_fnmadd_pd(ai1, br1, acc_im1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d ar = _mm256_loadu_pd(a_re + i);
    const __m256d ai = _mm256_loadu_pd(a_im + i);
    const __m256d br = _mm256_loadu_pd(b_re + i);
    const __m256d bi = _mm256_loadu_pd(b_im + i);
    acc_re0 = _mm256_fmadd_pd(ar, br, acc_re0);
    acc_re0 = _mm256_fmadd_pd(ai, bi, acc_re0);
    acc_im0 = _mm256_fmadd_pd(ar, bi, acc_im0);
    acc_im0 = _mm256_fnmadd_pd(ai, br, acc_im0);
  }
  double re = hsum(_mm256_add_pd(acc_re0, acc_re1));
  double im = hsum(_mm256_add_pd(acc_im0, acc_im1));
  for (; i < n; ++i) {
    re += a_re[i] * b_re[i] + a_im[i] * b_im[i];
    im += a_re[i] * b_im[i] - a_im[i] * b_re[i];
  }
  return {re, im};
}

double abs_sum(const double* re, const double* im, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    const __m256d sq = _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += std::hypot(re[i], im[i]);
  return total;
}

void scale(double c_re, double c_im, const double* a_re, const double* a_im, double* out_re,
           double* out_im, std::size_t n) noexcept {
  const __m256d cr = _mm256_set1_pd(c_re);
  const __m256d ci = _mm256_set1_pd(c_im);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(a_re + i);
    const __m256d m = _mm256_loadu_pd(a_im + i);
    _mm256_storeu_pd(out_re + i, _mm256_fmsub_pd(cr, r, _mm256_mul_pd(ci, m)));
    _mm256_storeu_pd(out_im + i, _mm256_fmadd_pd(cr, m, _mm256_mul_pd(ci, r)));
  }
  for (; i < n; ++i) {
    const double r = a_re[i];
    const double m = a_im[i];
    out_re[i] = c_re * r - c_im * m;
    out_im[i] = c_re * m + c_im * r;
  }
}

}  // namespace irsim::kernels::avx2
