#include <atomic>
#include <stdexcept>

#include "irsim/kernels.hpp"

namespace irsim::kernels {

namespace {

struct Table {
  Isa isa;
  std::complex<double> (*dot_conj)(const double*, const double*, const double*, const double*,
                                   std::size_t) noexcept;
  double (*abs_sum)(const double*, const double*, std::size_t) noexcept;
  void (*scale)(double, double, const double*, const double*, double*, double*,
                std::size_t) noexcept;
};

constexpr Table kScalar{Isa::scalar, &scalar::dot_conj, &scalar::abs_sum, &scalar::scale};
#ifdef IRSIM_HAVE_AVX2
constexpr Table kAvx2{Isa::avx2, &avx2::dot_conj, &avx2::abs_sum, &avx2::scale};
#endif

bool cpu_has_avx2() noexcept {
#if defined(IRSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return has;
#else
  return false;
#endif
}

const Table* best_table() noexcept {
#ifdef IRSIM_HAVE_AVX2
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const Table*>& current() noexcept {
  static std::atomic<const Table*> table{best_table()};
  return table;
}

inline const Table& table() noexcept { return *current().load(std::memory_order_relaxed); }

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

Isa active_isa() noexcept { return table().isa; }

bool select_isa(Isa isa) noexcept {
  if (!isa_available(isa)) return false;
  switch (isa) {
    case Isa::scalar:
      current().store(&kScalar);
      return true;
    case Isa::avx2:
#ifdef IRSIM_HAVE_AVX2
      current().store(&kAvx2);
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::complex<double> dot_conj(std::span<const double> a_re, std::span<const double> a_im,
                              std::span<const double> b_re, std::span<const double> b_im) {
  const std::size_t n = a_re.size();
  require_same_size(n, a_im.size());
  require_same_size(n, b_re.size());
  require_same_size(n, b_im.size());
  return table().dot_conj(a_re.data(), a_im.data(), b_re.data(), b_im.data(), n);
}

double abs_sum(std::span<const double> re, std::span<const double> im) {
  require_same_size(re.size(), im.size());
  return table().abs_sum(re.data(), im.data(), re.size());
}

void scale(std::complex<double> c, std::span<const double> a_re, std::span<const double> a_im,
           std::span<double> out_re, std::span<double> out_im) {
  const std::size_t n = a_re.size();
  require_same_size(n, a_im.size());
  require_same_size(n, out_re.size());
  require_same_size(n, out_im.size());
  table().scale(c.real(), c.imag(), a_re.data(), a_im.data(), out_re.data(), out_im.data(), n);
}

}  // namespace irsim::kernels
