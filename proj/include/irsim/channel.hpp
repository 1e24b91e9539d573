#pragma once

// Saleh-Valenzuela mmWave channels on a discrete angle grid.
//
// "Angle" means the sine-domain spatial frequency phi = (2d/lambda) sin(chi)
// with d = lambda/2. Single-hop angles come from the angle-book
// {-1 + 2i/M}. A cascaded BS->IRS->UE path has angle phi + psi, which is
// only ever used through exp(-j*pi*m*angle), so it is kept as an exact
// integer beam index c in [0, M) with angle 2c/M (mod 2). Two paths align
// exactly when their beam indices are equal; otherwise their steering vectors
// are orthogonal.

#include <complex>
#include <memory>
#include <vector>

#include "irsim/kernels.hpp"
#include "irsim/rng.hpp"

namespace irsim {

/// The M-point grid {-1 + 2i/M : i = 0..M-1}.
class AngleBook {
 public:
  explicit AngleBook(int m);

  int size() const noexcept { return m_; }
  double operator[](int i) const noexcept { return -1.0 + 2.0 * i / m_; }
  std::vector<double> entries() const;

 private:
  int m_;
};

/// ULA response (1/sqrt(m)) [1, e^{-j pi phi}, ..., e^{-j (m-1) pi phi}].
std::vector<std::complex<double>> array_response(int m, double phi);

/// Wraps an angle into [-1, 1) modulo 2.
double wrap_angle(double x) noexcept;

/// (phi + psi) wrapped into [-1, 1). Throws std::domain_error if either input
/// is outside [-1, 1).
double cascaded_angle(double phi, double psi);

/// Angle 2c/M wrapped into [-1, 1) of beam index c.
double beam_angle(int beam, int m) noexcept;

/// Cascaded paths through one IRS: gains (without the sqrt(M/L) scaling,
/// which the effective-channel operations apply) and beam indices.
struct PathSet {
  int m = 1;
  std::vector<std::complex<double>> gains;
  std::vector<int> beams;

  std::size_t size() const noexcept { return gains.size(); }
  double angle(std::size_t l) const { return beam_angle(beams.at(l), m); }
};

/// One slot's draw for one UE.
struct ChannelRealization {
  std::complex<double> direct;
  std::vector<PathSet> per_irs;
};

/**
 * Draws L1 BS->IRS paths (angle-book index, CN(0, var_1) gain) and L2
 * IRS->UE paths (CN(0, var_2)), and returns all L1*L2 cascaded products,
 * ordered with the IRS->UE index varying fastest.
 */
PathSet sample_path_set(CounterRng& rng, int m, int paths_1, int paths_2, double var_1,
                        double var_2);

/// CN(0, var) draw of a direct-link coefficient.
std::complex<double> sample_direct(CounterRng& rng, double var);

/**
 * Rows W_c[n] = e^{-j 2 pi n c / M} = e^{-j pi n angle_c}, i.e. M times the
 * M-normalized steering vector of beam c. Built once per M and shared
 * read-only; entries come from an exact index reduction, so distinct rows are
 * orthogonal to rounding.
 */
class SteeringTable {
 public:
  explicit SteeringTable(int m);

  /// Process-wide cached instance.
  static std::shared_ptr<const SteeringTable> shared(int m);

  int size() const noexcept { return m_; }
  const SplitComplex& row(int beam) const { return rows_.at(static_cast<std::size_t>(beam)); }

  /// (1/M) sum_n conj(W_c[n]) theta[n]  -- the normalized steering vector of
  /// beam c applied to a phase vector.
  std::complex<double> project(int beam, const SplitComplex& theta) const;

 private:
  int m_;
  std::vector<SplitComplex> rows_;
};

}  // namespace irsim
