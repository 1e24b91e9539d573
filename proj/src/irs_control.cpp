#include "irsim/irs_control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsim {

double PhaseConfig::max_modulus_error() const {
  double worst = 0.0;
  for (const auto& theta : per_irs) {
    for (std::size_t n = 0; n < theta.size(); ++n)
      worst = std::max(worst, std::abs(std::hypot(theta.re[n], theta.im[n]) - 1.0));
  }
  return worst;
}

namespace {

std::complex<double> unit_phase(std::complex<double> z) {
  const double r = std::abs(z);
  return r > 0.0 ? z / r : std::complex<double>(1.0, 0.0);
}

void check_shape(std::span<const PathSet> paths, const PhaseConfig& phases, const char* who) {
  if (paths.size() != phases.size())
    throw std::invalid_argument(std::string(who) + ": path sets and phase vectors differ in count");
  for (std::size_t s = 0; s < paths.size(); ++s) {
    if (paths[s].m != phases.m || phases.per_irs[s].size() != static_cast<std::size_t>(phases.m))
      throw std::invalid_argument(std::string(who) + ": element count mismatch");
  }
}

}  // namespace

PhaseConfig optimal_phase_config(std::complex<double> direct, std::span<const PathSet> inband,
                                 int m) {
  if (m < 1) throw std::invalid_argument("optimal_phase_config: m must be >= 1");
  const auto table = SteeringTable::shared(m);
  const std::complex<double> direct_phase = unit_phase(direct);
  PhaseConfig cfg;
  cfg.m = m;
  cfg.per_irs.reserve(inband.size());
  for (const PathSet& p : inband) {
    if (p.size() != 1 || p.m != m)
      throw std::invalid_argument("optimal_phase_config: expects one single-path set per IRS");
    const std::complex<double> c = direct_phase * std::conj(unit_phase(p.gains[0]));
    const SplitComplex& w = table->row(p.beams[0]);
    SplitComplex theta(w.size());
    kernels::scale(c, w.re, w.im, theta.re, theta.im);
    cfg.per_irs.push_back(std::move(theta));
  }
  return cfg;
}

PhaseConfig random_phase_config(CounterRng& rng, int s, int m) {
  if (s < 0 || m < 1) throw std::invalid_argument("random_phase_config: bad dimensions");
  PhaseConfig cfg;
  cfg.m = m;
  cfg.per_irs.reserve(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    SplitComplex theta(static_cast<std::size_t>(m));
    for (std::size_t n = 0; n < theta.size(); ++n) {
      const double a = rng.uniform_phase();
      theta.re[n] = std::cos(a);
      theta.im[n] = std::sin(a);
    }
    cfg.per_irs.push_back(std::move(theta));
  }
  return cfg;
}

EffectiveChannel effective_channel_inband(std::complex<double> direct,
                                          std::span<const PathSet> inband,
                                          const PhaseConfig& phases) {
  check_shape(inband, phases, "effective_channel_inband");
  for (const PathSet& p : inband) {
    if (p.size() != 1)
      throw std::invalid_argument("effective_channel_inband: expects single-path sets");
  }
  if (inband.empty()) return {direct};
  const auto table = SteeringTable::shared(phases.m);
  std::complex<double> reflected{};
  for (std::size_t s = 0; s < inband.size(); ++s)
    reflected += inband[s].gains[0] * table->project(inband[s].beams[0], phases.per_irs[s]);
  return {direct + static_cast<double>(phases.m) * reflected};
}

EffectiveChannel effective_channel_oob(std::complex<double> direct,
                                       std::span<const PathSet> oob,
                                       const PhaseConfig& phases) {
  check_shape(oob, phases, "effective_channel_oob");
  if (oob.empty()) return {direct};
  const std::size_t paths = oob.front().size();
  if (paths == 0) throw std::invalid_argument("effective_channel_oob: empty path set");
  for (const PathSet& p : oob) {
    if (p.size() != paths)
      throw std::invalid_argument("effective_channel_oob: inconsistent L across IRSs");
  }
  const auto table = SteeringTable::shared(phases.m);
  std::complex<double> reflected{};
  for (std::size_t s = 0; s < oob.size(); ++s) {
    for (std::size_t l = 0; l < paths; ++l)
      reflected += oob[s].gains[l] * table->project(oob[s].beams[l], phases.per_irs[s]);
  }
  const double scale = phases.m / std::sqrt(static_cast<double>(paths));
  return {direct + scale * reflected};
}

int alignment_count(std::span<const int> beam_per_irs, std::span<const PathSet> oob) {
  if (beam_per_irs.size() != oob.size())
    throw std::invalid_argument("alignment_count: one steered beam per IRS required");
  int count = 0;
  for (std::size_t s = 0; s < oob.size(); ++s) {
    const auto& beams = oob[s].beams;
    if (std::find(beams.begin(), beams.end(), beam_per_irs[s]) != beams.end()) ++count;
  }
  return count;
}

std::vector<int> steered_beams(std::span<const PathSet> inband) {
  std::vector<int> out;
  out.reserve(inband.size());
  for (const PathSet& p : inband) out.push_back(p.beams.at(0));
  return out;
}

}  // namespace irsim
