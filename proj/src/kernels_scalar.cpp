#include <cmath>

#include "irsim/kernels.hpp"

namespace irsim::kernels::scalar {

std::complex<double> dot_conj(const double* a_re, const double* a_im, const double* b_re,
                              const double* b_im, std::size_t n) noexcept {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a_re[i] * b_re[i] + a_im[i] * b_im[i];
    im += a_re[i] * b_im[i] - a_im[i] * b_re[i];
  }
  return {re, im};
}

double abs_sum(const double* re, const double* im, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::hypot(re[i], im[i]);
  return acc;
}

void scale(double c_re, double c_im, const double* a_re, const double* a_im, double* out_re,
           double* out_im, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = a_re[i];
    const double m = a_im[i];
    out_re[i] = c_re * r - c_im * m;
    out_im[i] = c_re * m + c_im * r;
  }
}

}  // namespace irsim::kernels::scalar
