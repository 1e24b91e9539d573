#include "irsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "irsim/errors.hpp"

namespace irsim {

namespace {

constexpr double kPi2Over16 = std::numbers::pi * std::numbers::pi / 16.0;
// E|h_d| * E|gamma| * 2 with |h_d| Rayleigh and |gamma| a product of two
// Rayleighs: 2 * (sqrt(pi)/2) * (pi/4) = pi^{3/2}/4.
const double kCrossTerm = std::pow(std::numbers::pi, 1.5) / 4.0;

// Target accuracy handed to the quadrature; the contract is checked against
// kQuadContract.
constexpr double kQuadTarget = 1e-13;
constexpr double kQuadContract = 1e-8;
constexpr unsigned kQuadDepth = 15;

// Integral over [0, inf) of g(w), where g may change on the scale `feature`
// near w = 0 and otherwise decays like e^{-w}. Small-scale structure is
// integrated on [0, feature], then on a log scale up to 1; the tail uses
// w = 1 + u / (1 - u).
template <class F>
double half_line_integral(F g, double feature, const char* who) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  double value = 0.0;
  double error = 0.0;
  auto add = [&](auto f, double a, double b) {
    double e = 0.0;
    value += Quad::integrate(f, a, b, kQuadDepth, kQuadTarget, &e);
    error += e;
  };
  double tail_start = 0.0;
  if (feature < 1.0) {
    add(g, 0.0, feature);
    add([&](double v) {
          const double w = feature * std::exp(v);
          return g(w) * w;
        },
        0.0, -std::log(feature));
    tail_start = 1.0;
  }
  add([&](double u) {
        if (u >= 1.0) return 0.0;
        const double one_minus = 1.0 - u;
        return g(tail_start + u / one_minus) / (one_minus * one_minus);
      },
      0.0, 1.0);
  if (!std::isfinite(value) || error > kQuadContract * std::max(std::abs(value), 1e-300)) {
    std::ostringstream os;
    os << who << ": quadrature did not converge (value " << value << ", error estimate "
       << error << ")";
    throw NumericalError(os.str());
  }
  return value;
}

}  // namespace

double alignment_probability(int m, int l, AlignmentModel model) {
  if (m < 1 || l < 1) throw std::domain_error("alignment_probability: m and l must be >= 1");
  switch (model) {
    case AlignmentModel::ratio:
      return static_cast<double>(std::min(l, m)) / m;
    case AlignmentModel::exact:
      return -std::expm1(l * std::log1p(-1.0 / m));
  }
  return 0.0;
}

void RateLawParams::validate() const {
  if (s < 1 || m < 1 || l < 1) throw std::domain_error("RateLawParams: S, M, L must be >= 1");
  if (!(beta_r >= 0.0) || !(beta_d >= 0.0) || !(snr >= 0.0))
    throw std::domain_error("RateLawParams: path losses and snr must be >= 0");
}

double se_inband(const RateLawParams& p) {
  p.validate();
  const double n = static_cast<double>(p.n_total());
  const double bracket = n * n * (kPi2Over16 + p.eta() * (1.0 - kPi2Over16)) * p.beta_r +
                         n * kCrossTerm * std::sqrt(p.beta_d * p.beta_r) + p.beta_d;
  return std::log2(1.0 + bracket * p.snr);
}

double se_oob(const RateLawParams& p, AlignmentModel model) {
  p.validate();
  if (p.l >= p.m) {
    return std::log2(1.0 + (p.beta_d + static_cast<double>(p.n_total()) * p.beta_r) * p.snr);
  }
  const double prob = alignment_probability(p.m, p.l, model);
  const double per_irs = static_cast<double>(p.m) * p.m / p.l * p.beta_r;
  double acc = 0.0;
  for (int b = 0; b <= p.s; ++b) {
    const double w = binomial_pmf(p.s, prob, b);
    if (w == 0.0) continue;
    acc += w * std::log2(1.0 + (b * per_irs + p.beta_d) * p.snr);
  }
  return acc;
}

double sum_se_inband(const RateLawParams& base, std::span<const UeLoss> ues) {
  if (ues.empty()) throw std::domain_error("sum_se_inband: no UEs");
  double acc = 0.0;
  for (const UeLoss& ue : ues) {
    RateLawParams p = base;
    p.beta_r = ue.beta_r;
    p.beta_d = ue.beta_d;
    acc += se_inband(p);
  }
  return acc / static_cast<double>(ues.size());
}

double sum_se_oob(const RateLawParams& base, std::span<const UeLoss> ues, AlignmentModel model) {
  if (ues.empty()) throw std::domain_error("sum_se_oob: no UEs");
  double acc = 0.0;
  for (const UeLoss& ue : ues) {
    RateLawParams p = base;
    p.beta_r = ue.beta_r;
    p.beta_d = ue.beta_d;
    acc += se_oob(p, model);
  }
  return acc / static_cast<double>(ues.size());
}

double binomial_pmf(int n, double p, int k) {
  if (n < 0) throw std::domain_error("binomial_pmf: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_pmf: p must lie in [0, 1]");
  if (k < 0 || k > n) throw std::domain_error("binomial_pmf: k must lie in [0, n]");
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  if (n <= 50) {
    // Each partial product is an integer below 2^53, so the coefficient is exact.
    const int kk = std::min(k, n - k);
    double coeff = 1.0;
    for (int i = 0; i < kk; ++i) coeff = coeff * (n - i) / (i + 1);
    return coeff * std::pow(p, k) * std::pow(1.0 - p, n - k);
  }
  const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                         k * std::log(p) + (n - k) * std::log1p(-p);
  return std::exp(log_pmf);
}

double i0_integral(double x, double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(x >= 0.0))
    throw std::domain_error("i0_integral: requires x >= 0, c1 > 0, c2 > 0");
  // t = c1 + c2 w keeps the decay rate of the mapped integrand at O(1).
  return c2 * half_line_integral(
                  [=](double w) {
                    const double t = c1 + c2 * w;
                    return std::exp(-(x / t + t / c2));
                  },
                  (x + c1) / c2, "i0_integral");
}

double scaled_i0(double x, double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(x >= 0.0))
    throw std::domain_error("scaled_i0: requires x >= 0, c1 > 0, c2 > 0");
  // (e^{c1/c2}/c2) int_{c1}^inf e^{-x/t - t/c2} dt with t = c1 + c2 w.
  return half_line_integral(
      [=](double w) { return std::exp(-x / (c1 + c2 * w) - w); }, (x + c1) / c2, "scaled_i0");
}

double outage_p0(double rho, int m, int l, double beta_d, double beta_r) {
  if (!(rho >= 0.0)) throw std::domain_error("outage_p0: rho must be >= 0");
  if (m < 1 || l < 1) throw std::domain_error("outage_p0: m and l must be >= 1");
  if (!(beta_d > 0.0) || !(beta_r > 0.0))
    throw std::domain_error("outage_p0: path losses must be > 0");
  const int l_bar = std::min(l, m);
  const double p = static_cast<double>(l_bar) / m;
  const double c2 = static_cast<double>(m) * m / l_bar * beta_r;
  const double e = std::exp(-rho / beta_d);
  const double survive = scaled_i0(rho, beta_d, c2);
  return 1.0 - p * (survive - e) - e;
}

double outage_closed_form(double rho, int s, int m, int l, double beta_d, double beta_r) {
  if (s < 0) throw std::domain_error("outage_closed_form: S must be >= 0");
  double p0 = outage_p0(rho, m, l, beta_d, beta_r);
  constexpr double kSlack = 1e-9;
  if (p0 < -kSlack || p0 > 1.0 + kSlack) {
    std::ostringstream os;
    os << "outage_closed_form: P0 = " << p0 << " outside [0, 1]";
    throw NumericalError(os.str());
  }
  p0 = std::clamp(p0, 0.0, 1.0);
  return -std::expm1(-rho / beta_d) * std::pow(p0, s);
}

DesignRule design_rule(long n_total, long l) {
  if (n_total < 1 || l < 1) throw std::domain_error("design_rule: N and L must be >= 1");
  if (n_total == 1) return {1.0, 1, 1};
  DesignRule rule;
  rule.delta_star = l >= n_total ? 1.0 : std::log(static_cast<double>(l)) / std::log(static_cast<double>(n_total));
  // N^{delta*} = min(L, N) exactly; use the integer to avoid pow round-off.
  const long bound = std::min(l, n_total);
  long m = bound;
  while (n_total % m != 0) --m;
  rule.m_star = m;
  rule.s_star = n_total / m;
  return rule;
}

double prelog_factor(double sum_se, long n_total) {
  if (n_total < 2) throw std::domain_error("prelog_factor: N must be >= 2");
  return sum_se / std::log2(static_cast<double>(n_total));
}

}  // namespace irsim
