#pragma once

#include <cstdint>
#include <vector>

#include "irsim/analysis.hpp"
#include "irsim/channel.hpp"
#include "irsim/irs_control.hpp"
#include "irsim/scenario.hpp"

namespace irsim {

/// Execution knobs. Results never depend on `workers`: work is cut into
/// `chunk`-sized index ranges whose partial sums are folded in index order.
struct RunOptions {
  unsigned workers = 1;
  std::uint64_t chunk = 250;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Everything drawn and derived in one round-robin slot.
struct SlotOutcome {
  std::size_t inband_ue = 0;
  std::size_t oob_ue = 0;
  ChannelRealization inband;  // one dominant path per IRS
  ChannelRealization oob;     // L cascaded paths per IRS
  std::vector<int> steered;   // beam index each IRS is pointed at
  PhaseConfig phases;
  EffectiveChannel h_inband;
  EffectiveChannel h_oob;
  int aligned = 0;
};

/**
 * Generates slots of the two-operator system. Slot t serves in-band UE
 * t mod K and OOB UE t mod Q, draws fresh fading and angles from
 * (master_seed, slot stream, t), and configures all IRSs optimally for the
 * in-band UE.
 */
class SlotSimulator {
 public:
  SlotSimulator(ScenarioConfig cfg, Topology topo);
  explicit SlotSimulator(const ScenarioConfig& cfg);

  SlotOutcome run(std::uint64_t slot) const;

  /// Same draws as `run`, but for an explicit RNG and UE pair.
  SlotOutcome draw(CounterRng& rng, std::size_t inband_ue, std::size_t oob_ue) const;

  const ScenarioConfig& config() const noexcept { return cfg_; }
  const Topology& topology() const noexcept { return topo_; }

 private:
  ScenarioConfig cfg_;
  Topology topo_;
};

struct SweepResult {
  long n_total = 0;
  int s = 0;
  int m = 0;
  int l = 0;
  Estimate inband;  ///< empirical sum-SE of the IRS-controlling operator
  Estimate oob;     ///< empirical sum-SE of the out-of-band operator
  double inband_closed_form = 0.0;
  double oob_closed_form = 0.0;        ///< alignment probability L/M
  double oob_closed_form_exact = 0.0;  ///< alignment probability 1 - (1 - 1/M)^L
  std::uint64_t slots = 0;
  std::uint64_t seed = 0;
};

/// Round-robin ergodic sum-SE of both operators over `cfg.slots` slots.
SweepResult run_sum_se(const ScenarioConfig& cfg, const RunOptions& opts = {});

struct OutageReport {
  long n_total = 0;
  int s = 0;
  int m = 0;
  int l = 0;
  double delta = 0.0;  ///< log_N L (0 when N < 2)
  double rho = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  double estimate = 0.0;
  double ci_lo = 0.0;  ///< 95% Wilson interval
  double ci_hi = 0.0;
  double closed_form = 0.0;
};

/// Empirical Pr(|h_q|^2 <= rho) with IRSs optimized for an independent
/// in-band target in every trial. Path losses are normalized to 1 unless
/// `normalize` is false.
OutageReport run_outage(const ScenarioConfig& cfg, double rho, std::uint64_t trials,
                        const RunOptions& opts = {}, bool normalize = true);

struct AlignmentHistogram {
  int s = 0;
  int m = 0;
  int l = 0;
  std::vector<std::uint64_t> counts;  ///< counts[b] = trials with B = b
  std::uint64_t trials = 0;
  double p_ratio = 0.0;
  double p_exact = 0.0;
  double p_fitted = 0.0;  ///< mean(B) / S
  double tv_ratio = 0.0;  ///< total variation to Binomial(S, p_ratio)
  double tv_exact = 0.0;  ///< total variation to Binomial(S, p_exact)
};

AlignmentHistogram run_alignment(const ScenarioConfig& cfg, std::uint64_t trials,
                                 const RunOptions& opts = {});

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double closed_form = 0.0;
};

/// Moments of the three terms of |h_k|^2 = |h_d|^2 + M^2 (sum|gamma|)^2
/// + 2 M |h_d| sum|gamma| under optimal phases.
struct TermDecomposition {
  MomentEstimate direct;
  MomentEstimate reflected;
  MomentEstimate cross;
  std::uint64_t samples = 0;
};

TermDecomposition run_term_decomposition(const ScenarioConfig& cfg, std::uint64_t samples,
                                         const RunOptions& opts = {});
/// Same, with explicit path losses (e.g. a zero direct link).
TermDecomposition run_term_decomposition(const ScenarioConfig& cfg, const Topology& topo,
                                         std::uint64_t samples, const RunOptions& opts = {});

/// 95% Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Total variation distance between an empirical histogram and
/// Binomial(n, p), n = counts.size() - 1.
double tv_to_binomial(const std::vector<std::uint64_t>& counts, double p);

}  // namespace irsim
