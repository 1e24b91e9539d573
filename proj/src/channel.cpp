#include "irsim/channel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace irsim {

AngleBook::AngleBook(int m) : m_(m) {
  if (m < 1) throw std::domain_error("AngleBook: element count must be >= 1");
}

std::vector<double> AngleBook::entries() const {
  std::vector<double> out(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) out[static_cast<std::size_t>(i)] = (*this)[i];
  return out;
}

std::vector<std::complex<double>> array_response(int m, double phi) {
  if (m < 1) throw std::domain_error("array_response: element count must be >= 1");
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<std::complex<double>> a(static_cast<std::size_t>(m));
  for (int n = 0; n < m; ++n) {
    // Reduce n*phi modulo 2 first so large n does not lose phase accuracy.
    const double turns = std::remainder(n * phi, 2.0);
    a[static_cast<std::size_t>(n)] = std::polar(norm, -std::numbers::pi * turns);
  }
  return a;
}

double wrap_angle(double x) noexcept {
  double r = std::fmod(x + 1.0, 2.0);
  if (r < 0.0) r += 2.0;
  double out = r - 1.0;
  if (out >= 1.0) out -= 2.0;
  return out;
}

double cascaded_angle(double phi, double psi) {
  auto in_range = [](double x) { return x >= -1.0 && x < 1.0; };
  if (!in_range(phi) || !in_range(psi))
    throw std::domain_error("cascaded_angle: inputs must lie in [-1, 1)");
  double s = phi + psi;
  if (s >= 1.0) s -= 2.0;
  else if (s < -1.0) s += 2.0;
  return s;
}

double beam_angle(int beam, int m) noexcept { return wrap_angle(2.0 * beam / m); }

PathSet sample_path_set(CounterRng& rng, int m, int paths_1, int paths_2, double var_1,
                        double var_2) {
  if (m < 1 || paths_1 < 1 || paths_2 < 1)
    throw std::invalid_argument("sample_path_set: m, L1 and L2 must be >= 1");
  const auto mm = static_cast<std::uint64_t>(m);
  std::vector<int> idx_1(static_cast<std::size_t>(paths_1));
  std::vector<std::complex<double>> gain_1(idx_1.size());
  for (std::size_t i = 0; i < idx_1.size(); ++i) {
    idx_1[i] = static_cast<int>(rng.uniform_index(mm));
    gain_1[i] = rng.complex_normal(var_1);
  }
  std::vector<int> idx_2(static_cast<std::size_t>(paths_2));
  std::vector<std::complex<double>> gain_2(idx_2.size());
  for (std::size_t j = 0; j < idx_2.size(); ++j) {
    idx_2[j] = static_cast<int>(rng.uniform_index(mm));
    gain_2[j] = rng.complex_normal(var_2);
  }

  PathSet out;
  out.m = m;
  out.gains.reserve(idx_1.size() * idx_2.size());
  out.beams.reserve(idx_1.size() * idx_2.size());
  for (std::size_t i = 0; i < idx_1.size(); ++i) {
    for (std::size_t j = 0; j < idx_2.size(); ++j) {
      out.gains.push_back(gain_1[i] * gain_2[j]);
      // (-1 + 2i/M) + (-1 + 2j/M) = 2(i + j)/M - 2  ==  2((i + j) mod M)/M  (mod 2)
      out.beams.push_back((idx_1[i] + idx_2[j]) % m);
    }
  }
  return out;
}

std::complex<double> sample_direct(CounterRng& rng, double var) {
  if (var < 0.0) throw std::domain_error("sample_direct: variance must be >= 0");
  return rng.complex_normal(var);
}

SteeringTable::SteeringTable(int m) : m_(m) {
  if (m < 1) throw std::domain_error("SteeringTable: element count must be >= 1");
  const auto n = static_cast<std::size_t>(m);
  SplitComplex twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / m;
    twiddle.re[k] = std::cos(a);
    twiddle.im[k] = std::sin(a);
  }
  rows_.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    SplitComplex row(n);
    for (std::size_t e = 0; e < n; ++e) {
      const std::size_t k = (e * c) % n;
      row.re[e] = twiddle.re[k];
      row.im[e] = twiddle.im[k];
    }
    rows_.push_back(std::move(row));
  }
}

std::shared_ptr<const SteeringTable> SteeringTable::shared(int m) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SteeringTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_shared<const SteeringTable>(m);
  return slot;
}

std::complex<double> SteeringTable::project(int beam, const SplitComplex& theta) const {
  if (theta.size() != static_cast<std::size_t>(m_))
    throw std::invalid_argument("SteeringTable::project: phase vector length != M");
  return kernels::dot_conj(row(beam), theta) / static_cast<double>(m_);
}

}  // namespace irsim
