#pragma once

#include <complex>
#include <span>
#include <vector>

#include "irsim/channel.hpp"
#include "irsim/kernels.hpp"
#include "irsim/rng.hpp"

namespace irsim {

/// Per-IRS unit-modulus phase vectors theta_s = diag(Theta_s).
struct PhaseConfig {
  int m = 1;
  std::vector<SplitComplex> per_irs;

  std::size_t size() const noexcept { return per_irs.size(); }
  /// max | |theta_{s,n}| - 1 | over all entries.
  double max_modulus_error() const;
};

struct EffectiveChannel {
  std::complex<double> value;

  double gain() const noexcept { return std::norm(value); }
};

/**
 * Closed-form maximizer of |h_k| for one in-band UE:
 *   theta_s = (h_d conj(gamma_s) / |h_d gamma_s|) * M * a_dot(omega_s).
 * Every IRS then adds M |gamma_s| in phase with h_d. `inband` holds one
 * single-path PathSet per IRS. A vanishing h_d or gamma_s contributes a unit
 * phase factor.
 */
PhaseConfig optimal_phase_config(std::complex<double> direct, std::span<const PathSet> inband,
                                 int m);

/// I.i.d. uniform phases on [0, 2 pi).
PhaseConfig random_phase_config(CounterRng& rng, int s, int m);

/// h = h_d + M * sum_s gamma_s a_dot^H(omega_s) theta_s.
EffectiveChannel effective_channel_inband(std::complex<double> direct,
                                          std::span<const PathSet> inband,
                                          const PhaseConfig& phases);

/// h = h_d + (M / sqrt(L)) * sum_s sum_l gamma_{s,l} a_dot^H(omega_{s,l}) theta_s.
EffectiveChannel effective_channel_oob(std::complex<double> direct,
                                       std::span<const PathSet> oob,
                                       const PhaseConfig& phases);

/// Number of IRSs for which at least one OOB cascaded path shares the beam
/// index the IRS is steered to.
int alignment_count(std::span<const int> beam_per_irs, std::span<const PathSet> oob);

/// Beam indices of the in-band dominant paths (what optimal phases steer to).
std::vector<int> steered_beams(std::span<const PathSet> inband);

}  // namespace irsim
