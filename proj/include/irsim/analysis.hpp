#pragma once

// Closed-form rate laws, outage probability and the distributed-IRS design
// rule for an in-band operator X (controls the IRSs) and an out-of-band
// operator Y (does not).

#include <span>

namespace irsim {

/// How the per-IRS probability of aligning with an OOB UE is modelled in the
/// Binomial mixture.
enum class AlignmentModel {
  /// min(L, M) / M: flat-top beam approximation used by the rate law.
  ratio,
  /// 1 - (1 - 1/M)^L: exact for L i.i.d. uniform grid angles.
  exact,
};

double alignment_probability(int m, int l, AlignmentModel model);

/// Inputs of the per-UE rate laws. `beta_r` is the cascaded path loss
/// beta_f * beta_g and `snr` is P / sigma^2 (linear).
struct RateLawParams {
  int s = 1;
  int m = 1;
  int l = 1;
  double beta_r = 1.0;
  double beta_d = 1.0;
  double snr = 1.0;

  long n_total() const noexcept { return static_cast<long>(s) * m; }
  double eta() const noexcept { return 1.0 / s; }
  /// Throws std::domain_error.
  void validate() const;
};

/// Per-UE in-band ergodic SE (bps/Hz) under optimal IRS phases:
/// log2(1 + [N^2 (pi^2/16 + eta (1 - pi^2/16)) beta_r
///           + N (pi^{3/2}/4) sqrt(beta_d beta_r) + beta_d] snr).
double se_inband(const RateLawParams& p);

/// Per-UE OOB ergodic SE: Binomial(S, p) mixture of
/// log2(1 + [b M^2 beta_r / L + beta_d] snr) when L < M, otherwise
/// log2(1 + (beta_d + N beta_r) snr).
double se_oob(const RateLawParams& p, AlignmentModel model = AlignmentModel::ratio);

/// Per-UE path losses for the sum-SE wrappers.
struct UeLoss {
  double beta_r = 1.0;
  double beta_d = 1.0;
};

/// Round-robin sum-SE: mean of the per-UE law over the UEs' path losses.
/// `base` supplies S, M, L and snr.
double sum_se_inband(const RateLawParams& base, std::span<const UeLoss> ues);
double sum_se_oob(const RateLawParams& base, std::span<const UeLoss> ues,
                  AlignmentModel model = AlignmentModel::ratio);

/// C(n, k) p^k (1 - p)^(n - k). Exact product form for n <= 50, log space
/// above. Throws std::domain_error on invalid p or k.
double binomial_pmf(int n, double p, int k);

/// I0(x; c1, c2) = integral_{c1}^{inf} exp(-(x/t + t/c2)) dt, by adaptive
/// Gauss-Kronrod on t = c1 + u/(1-u). Relative accuracy 1e-8 or better;
/// throws NumericalError if the error estimate misses that.
double i0_integral(double x, double c1, double c2);

/// exp(c1/c2) / c2 * I0(x; c1, c2), evaluated without forming the two
/// factors separately (they over/underflow when c1 >> c2). Equals
/// Pr(|h|^2 > x) for h ~ CN(0, c1 + c2 * Exp(1)).
double scaled_i0(double x, double c1, double c2);

/// Per-IRS factor P0 of the OOB outage law.
double outage_p0(double rho, int m, int l, double beta_d, double beta_r);

/// (1 - exp(-rho/beta_d)) * P0^S. Tiny negative round-off in P0 is clamped
/// to zero; a P0 outside [-1e-9, 1 + 1e-9] throws NumericalError.
double outage_closed_form(double rho, int s, int m, int l, double beta_d, double beta_r);

/// Minimum-IRS-count design for maximal OOB SE scaling.
struct DesignRule {
  double delta_star = 1.0;  ///< min(1, log_N L)
  long m_star = 1;          ///< largest divisor of N not above N^delta*
  long s_star = 1;          ///< N / m_star
};

DesignRule design_rule(long n_total, long l);

/// tau = sum_se / log2(N). Throws std::domain_error for N < 2.
double prelog_factor(double sum_se, long n_total);

}  // namespace irsim
