#include "irsim/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "irsim/kernels.hpp"
#include "irsim/parallel.hpp"

namespace irsim {

namespace {

struct Moments {
  std::uint64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) noexcept {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Moments& o) noexcept {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const noexcept { return n ? sum / static_cast<double>(n) : 0.0; }
  // Variance of the mean.
  double mean_variance() const noexcept {
    if (n < 2) return 0.0;
    const double dn = static_cast<double>(n);
    const double var = std::max(0.0, (sum_sq - sum * sum / dn) / (dn - 1.0));
    return var / dn;
  }
};

// Mean over UEs of per-UE means, with the matching standard error.
Estimate ue_average(const std::vector<Moments>& per_ue) {
  double mean = 0.0;
  double var = 0.0;
  std::size_t served = 0;
  for (const Moments& m : per_ue) {
    if (m.n == 0) continue;
    mean += m.mean();
    var += m.mean_variance();
    ++served;
  }
  if (served == 0) return {};
  const double k = static_cast<double>(served);
  return {mean / k, std::sqrt(var) / k};
}

double log2_1p(double x) noexcept { return std::log1p(x) / std::numbers::ln2; }

ScenarioConfig normalized(ScenarioConfig cfg) {
  cfg.normalize_pathloss = true;
  return cfg;
}

}  // namespace

SlotSimulator::SlotSimulator(ScenarioConfig cfg, Topology topo)
    : cfg_(std::move(cfg)), topo_(std::move(topo)) {
  cfg_.validate();
  if (topo_.beta_direct_x.size() != static_cast<std::size_t>(cfg_.num_ues_x) ||
      topo_.beta_direct_y.size() != static_cast<std::size_t>(cfg_.num_ues_y))
    throw std::invalid_argument("SlotSimulator: topology does not match the config");
}

SlotSimulator::SlotSimulator(const ScenarioConfig& cfg) : SlotSimulator(cfg, build_topology(cfg)) {}

SlotOutcome SlotSimulator::draw(CounterRng& rng, std::size_t k, std::size_t q) const {
  const int S = cfg_.num_irs;
  const int M = cfg_.elements_per_irs;
  const int L = cfg_.paths;
  SlotOutcome out;
  out.inband_ue = k;
  out.oob_ue = q;
  out.inband.per_irs.reserve(static_cast<std::size_t>(S));
  out.oob.per_irs.reserve(static_cast<std::size_t>(S));

  for (int s = 0; s < S; ++s)
    out.inband.per_irs.push_back(sample_path_set(rng, M, 1, 1, topo_.beta_f_x, topo_.beta_g_x[k]));
  out.inband.direct = sample_direct(rng, topo_.beta_direct_x[k]);
  // OOB: one dominant BS->IRS path, L IRS->UE paths.
  for (int s = 0; s < S; ++s)
    out.oob.per_irs.push_back(sample_path_set(rng, M, 1, L, topo_.beta_f_y, topo_.beta_g_y[q]));
  out.oob.direct = sample_direct(rng, topo_.beta_direct_y[q]);

  out.phases = optimal_phase_config(out.inband.direct, out.inband.per_irs, M);
  out.steered = steered_beams(out.inband.per_irs);
  out.h_inband = effective_channel_inband(out.inband.direct, out.inband.per_irs, out.phases);
  out.h_oob = effective_channel_oob(out.oob.direct, out.oob.per_irs, out.phases);
  out.aligned = alignment_count(out.steered, out.oob.per_irs);
  return out;
}

SlotOutcome SlotSimulator::run(std::uint64_t slot) const {
  CounterRng rng(cfg_.master_seed, Stream::slot, slot);
  const auto K = static_cast<std::uint64_t>(cfg_.num_ues_x);
  const auto Q = static_cast<std::uint64_t>(cfg_.num_ues_y);
  return draw(rng, static_cast<std::size_t>(slot % K), static_cast<std::size_t>(slot % Q));
}

SweepResult run_sum_se(const ScenarioConfig& cfg, const RunOptions& opts) {
  const SlotSimulator sim(cfg);
  const Topology& topo = sim.topology();
  const double snr = cfg.snr_linear();
  const auto K = static_cast<std::size_t>(cfg.num_ues_x);
  const auto Q = static_cast<std::size_t>(cfg.num_ues_y);

  struct Partial {
    std::vector<Moments> x;
    std::vector<Moments> y;
  };
  auto partials = run_chunked<Partial>(cfg.slots, opts.chunk, opts.workers,
                                       [&](std::uint64_t begin, std::uint64_t end) {
                                         Partial p{std::vector<Moments>(K), std::vector<Moments>(Q)};
                                         for (std::uint64_t t = begin; t < end; ++t) {
                                           const SlotOutcome o = sim.run(t);
                                           p.x[o.inband_ue].add(log2_1p(o.h_inband.gain() * snr));
                                           p.y[o.oob_ue].add(log2_1p(o.h_oob.gain() * snr));
                                         }
                                         return p;
                                       });
  std::vector<Moments> x(K), y(Q);
  for (const Partial& p : partials) {
    for (std::size_t k = 0; k < K; ++k) x[k].merge(p.x[k]);
    for (std::size_t q = 0; q < Q; ++q) y[q].merge(p.y[q]);
  }

  SweepResult r;
  r.n_total = cfg.total_elements();
  r.s = cfg.num_irs;
  r.m = cfg.elements_per_irs;
  r.l = cfg.paths;
  r.inband = ue_average(x);
  r.oob = ue_average(y);
  r.slots = cfg.slots;
  r.seed = cfg.master_seed;

  std::vector<UeLoss> ues_x, ues_y;
  for (std::size_t k = 0; k < K; ++k) ues_x.push_back({topo.beta_r_x(k), topo.beta_direct_x[k]});
  for (std::size_t q = 0; q < Q; ++q) ues_y.push_back({topo.beta_r_y(q), topo.beta_direct_y[q]});
  if (cfg.num_irs == 0) {
    auto direct_only = [snr](const std::vector<UeLoss>& ues) {
      double acc = 0.0;
      for (const UeLoss& u : ues) acc += log2_1p(u.beta_d * snr);
      return acc / static_cast<double>(ues.size());
    };
    r.inband_closed_form = direct_only(ues_x);
    r.oob_closed_form = r.oob_closed_form_exact = direct_only(ues_y);
  } else {
    const RateLawParams base{cfg.num_irs, cfg.elements_per_irs, cfg.paths, 1.0, 1.0, snr};
    r.inband_closed_form = sum_se_inband(base, ues_x);
    r.oob_closed_form = sum_se_oob(base, ues_y, AlignmentModel::ratio);
    r.oob_closed_form_exact = sum_se_oob(base, ues_y, AlignmentModel::exact);
  }
  return r;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

OutageReport run_outage(const ScenarioConfig& cfg, double rho, std::uint64_t trials,
                        const RunOptions& opts, bool normalize) {
  if (trials < 1) throw std::invalid_argument("run_outage: trials must be >= 1");
  if (!(rho >= 0.0)) throw std::domain_error("run_outage: rho must be >= 0");
  const ScenarioConfig used = normalize ? normalized(cfg) : cfg;
  const SlotSimulator sim(used);
  const auto K = static_cast<std::uint64_t>(used.num_ues_x);
  const auto Q = static_cast<std::uint64_t>(used.num_ues_y);

  auto partials = run_chunked<std::uint64_t>(
      trials, opts.chunk, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
          CounterRng rng(used.master_seed, Stream::outage, i);
          const SlotOutcome o = sim.draw(rng, static_cast<std::size_t>(i % K), static_cast<std::size_t>(i % Q));
          if (o.h_oob.gain() <= rho) ++hits;
        }
        return hits;
      });

  OutageReport r;
  r.n_total = used.total_elements();
  r.s = used.num_irs;
  r.m = used.elements_per_irs;
  r.l = used.paths;
  r.delta = r.n_total >= 2 ? std::log(static_cast<double>(r.l)) / std::log(static_cast<double>(r.n_total)) : 0.0;
  r.rho = rho;
  r.trials = trials;
  for (std::uint64_t h : partials) r.outages += h;
  r.estimate = static_cast<double>(r.outages) / static_cast<double>(trials);
  std::tie(r.ci_lo, r.ci_hi) = wilson_interval(r.outages, trials);

  const Topology& topo = sim.topology();
  double cf = 0.0;
  for (std::size_t q = 0; q < topo.beta_direct_y.size(); ++q)
    cf += outage_closed_form(rho, r.s, r.m, r.l, topo.beta_direct_y[q], topo.beta_r_y(q));
  r.closed_form = cf / static_cast<double>(topo.beta_direct_y.size());
  return r;
}

double tv_to_binomial(const std::vector<std::uint64_t>& counts, double p) {
  if (counts.empty()) throw std::invalid_argument("tv_to_binomial: empty histogram");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("tv_to_binomial: no samples");
  const int n = static_cast<int>(counts.size()) - 1;
  double tv = 0.0;
  for (int b = 0; b <= n; ++b) {
    const double emp = static_cast<double>(counts[static_cast<std::size_t>(b)]) / static_cast<double>(total);
    tv += std::abs(emp - binomial_pmf(n, p, b));
  }
  return 0.5 * tv;
}

AlignmentHistogram run_alignment(const ScenarioConfig& cfg, std::uint64_t trials,
                                 const RunOptions& opts) {
  if (trials < 1) throw std::invalid_argument("run_alignment: trials must be >= 1");
  cfg.validate();
  const int S = cfg.num_irs;
  const int M = cfg.elements_per_irs;
  const int L = cfg.paths;
  const auto bins = static_cast<std::size_t>(S) + 1;

  auto partials = run_chunked<std::vector<std::uint64_t>>(
      trials, opts.chunk, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint64_t> counts(bins, 0);
        std::vector<PathSet> inband(static_cast<std::size_t>(S));
        std::vector<PathSet> oob(static_cast<std::size_t>(S));
        for (std::uint64_t i = begin; i < end; ++i) {
          CounterRng rng(cfg.master_seed, Stream::alignment, i);
          for (auto& p : inband) p = sample_path_set(rng, M, 1, 1, 1.0, 1.0);
          for (auto& p : oob) p = sample_path_set(rng, M, 1, L, 1.0, 1.0);
          ++counts[static_cast<std::size_t>(alignment_count(steered_beams(inband), oob))];
        }
        return counts;
      });

  AlignmentHistogram h;
  h.s = S;
  h.m = M;
  h.l = L;
  h.trials = trials;
  h.counts.assign(bins, 0);
  for (const auto& p : partials)
    for (std::size_t b = 0; b < bins; ++b) h.counts[b] += p[b];
  h.p_ratio = alignment_probability(M, L, AlignmentModel::ratio);
  h.p_exact = alignment_probability(M, L, AlignmentModel::exact);
  double mean_b = 0.0;
  for (std::size_t b = 0; b < bins; ++b) mean_b += static_cast<double>(b * h.counts[b]);
  mean_b /= static_cast<double>(trials);
  h.p_fitted = S > 0 ? mean_b / S : 0.0;
  h.tv_ratio = tv_to_binomial(h.counts, h.p_ratio);
  h.tv_exact = tv_to_binomial(h.counts, h.p_exact);
  return h;
}

TermDecomposition run_term_decomposition(const ScenarioConfig& cfg, std::uint64_t samples,
                                         const RunOptions& opts) {
  return run_term_decomposition(cfg, build_topology(cfg), samples, opts);
}

TermDecomposition run_term_decomposition(const ScenarioConfig& cfg, const Topology& topo,
                                         std::uint64_t samples, const RunOptions& opts) {
  if (samples < 1) throw std::invalid_argument("run_term_decomposition: samples must be >= 1");
  cfg.validate();
  const int S = cfg.num_irs;
  const int M = cfg.elements_per_irs;
  const auto K = static_cast<std::uint64_t>(cfg.num_ues_x);

  struct Partial {
    Moments direct, reflected, cross;
    std::vector<std::uint64_t> served;
  };
  auto partials = run_chunked<Partial>(
      samples, opts.chunk, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
        Partial p;
        p.served.assign(K, 0);
        SplitComplex gains(static_cast<std::size_t>(S));
        for (std::uint64_t i = begin; i < end; ++i) {
          const auto k = static_cast<std::size_t>(i % K);
          ++p.served[k];
          CounterRng rng(cfg.master_seed, Stream::terms, i);
          for (int s = 0; s < S; ++s) {
            const PathSet ps = sample_path_set(rng, M, 1, 1, topo.beta_f_x, topo.beta_g_x[k]);
            gains.set(static_cast<std::size_t>(s), ps.gains[0]);
          }
          const std::complex<double> hd = sample_direct(rng, topo.beta_direct_x[k]);
          const double abs_hd = std::abs(hd);
          const double sum_abs = kernels::abs_sum(gains);
          p.direct.add(abs_hd * abs_hd);
          p.reflected.add(static_cast<double>(M) * M * sum_abs * sum_abs);
          p.cross.add(2.0 * M * abs_hd * sum_abs);
        }
        return p;
      });

  Moments direct, reflected, cross;
  std::vector<std::uint64_t> served(K, 0);
  for (const Partial& p : partials) {
    direct.merge(p.direct);
    reflected.merge(p.reflected);
    cross.merge(p.cross);
    for (std::size_t k = 0; k < K; ++k) served[k] += p.served[k];
  }

  double cf_direct = 0.0, cf_reflected = 0.0, cf_cross = 0.0;
  const double s = S;
  const double m = M;
  for (std::size_t k = 0; k < K; ++k) {
    const double w = static_cast<double>(served[k]) / static_cast<double>(samples);
    const double br = topo.beta_r_x(k);
    const double bd = topo.beta_direct_x[k];
    cf_direct += w * bd;
    cf_reflected += w * m * m * br * (s * s * std::numbers::pi * std::numbers::pi / 16.0 +
                                      s * (1.0 - std::numbers::pi * std::numbers::pi / 16.0));
    cf_cross += w * m * s * std::pow(std::numbers::pi, 1.5) / 4.0 * std::sqrt(br * bd);
  }

  TermDecomposition t;
  t.samples = samples;
  t.direct = {direct.mean(), std::sqrt(direct.mean_variance()), cf_direct};
  t.reflected = {reflected.mean(), std::sqrt(reflected.mean_variance()), cf_reflected};
  t.cross = {cross.mean(), std::sqrt(cross.mean_variance()), cf_cross};
  return t;
}

}  // namespace irsim
