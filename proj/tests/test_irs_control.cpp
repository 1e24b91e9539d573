#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "irsim/channel.hpp"
#include "irsim/irs_control.hpp"
#include "support.hpp"

using namespace irsim;
using irsim::test::for_all;
using irsim::test::Gen;

namespace {

PathSet single(int m, std::complex<double> gain, int beam) {
  return PathSet{m, {gain}, {beam}};
}

std::vector<PathSet> random_inband(Gen& g, int s, int m) {
  std::vector<PathSet> out;
  for (int i = 0; i < s; ++i) out.push_back(sample_path_set(g.rng(), m, 1, 1, 1.0, 1.0));
  return out;
}

// Beam index c of the M-point lattice that differs from every entry of `avoid`.
int other_beam(const std::vector<int>& avoid, int m, Gen& g) {
  for (;;) {
    const int c = g.integer(0, m - 1);
    bool clash = false;
    for (int a : avoid) clash = clash || a == c;
    if (!clash) return c;
  }
}

}  // namespace

TEST_CASE("all-aligned optimal phases are all ones") {
  const int m = 16;
  const std::vector<PathSet> paths{single(m, 1.0, 0)};
  const PhaseConfig cfg = optimal_phase_config(1.0, paths, m);
  REQUIRE(cfg.size() == 1);
  for (std::size_t n = 0; n < 16; ++n) CHECK(std::abs(cfg.per_irs[0][n] - 1.0) <= 1e-15);
  CHECK(std::abs(effective_channel_inband(1.0, paths, cfg).value - 17.0) <= 1e-12);
}

TEST_CASE("property: optimal phases give the coherent gain") {
  for_all(0x1c01, 400, [](Gen& g) {
    const int s = g.integer(1, 16);
    const int m = g.pick({1, 2, 3, 8, 16, 64, 100});
    const auto paths = random_inband(g, s, m);
    const std::complex<double> hd = g.complex(g.log_uniform(1e-3, 10.0));
    const PhaseConfig cfg = optimal_phase_config(hd, paths, m);
    CHECK(cfg.max_modulus_error() <= 1e-12);
    double expected = std::abs(hd);
    for (const PathSet& p : paths) expected += m * std::abs(p.gains[0]);
    const EffectiveChannel h = effective_channel_inband(hd, paths, cfg);
    CHECK(std::abs(std::abs(h.value) - expected) <= 1e-9);
    CHECK(h.gain() == std::norm(h.value));
    // The sum is phase-aligned with the direct link.
    CHECK(std::abs(std::arg(h.value * std::conj(hd))) <= 1e-9);
  });
}

TEST_CASE("property: optimal phase entries") {
  // theta_n = exp(j (arg h_d - arg gamma - pi n omega))
  for_all(0x1c02, 200, [](Gen& g) {
    const int m = g.pick({2, 5, 16, 32});
    const auto paths = random_inband(g, 1, m);
    const std::complex<double> hd = g.complex();
    const PhaseConfig cfg = optimal_phase_config(hd, paths, m);
    const double omega = paths[0].angle(0);
    for (int n = 0; n < m; ++n) {
      const double a = std::arg(hd) - std::arg(paths[0].gains[0]) - std::numbers::pi * n * omega;
      CHECK(std::abs(cfg.per_irs[0][static_cast<std::size_t>(n)] - std::polar(1.0, a)) <= 1e-12);
    }
  });
}

TEST_CASE("vanishing direct link or path gain uses a unit phase factor") {
  const int m = 8;
  const std::vector<PathSet> paths{single(m, {0.0, 2.0}, 3), single(m, 0.0, 5)};
  const PhaseConfig cfg = optimal_phase_config(0.0, paths, m);
  CHECK(cfg.max_modulus_error() <= 1e-15);
  // IRS 0: conj(j) W_3; IRS 1: W_5.
  const auto& w3 = SteeringTable::shared(m)->row(3);
  const auto& w5 = SteeringTable::shared(m)->row(5);
  for (std::size_t n = 0; n < 8; ++n) {
    CHECK(std::abs(cfg.per_irs[0][n] - std::complex<double>(0, -1) * w3[n]) <= 1e-15);
    CHECK(std::abs(cfg.per_irs[1][n] - w5[n]) <= 1e-15);
  }
  CHECK(std::abs(effective_channel_inband(0.0, paths, cfg).value) == doctest::Approx(16.0));
}

TEST_CASE("property: common phase of the direct link rotates the channel") {
  for_all(0x1c03, 200, [](Gen& g) {
    const int s = g.integer(1, 8);
    const int m = g.pick({4, 16});
    const auto paths = random_inband(g, s, m);
    const std::complex<double> hd = g.complex();
    const std::complex<double> rot = std::polar(1.0, g.real(0.0, 2 * std::numbers::pi));
    const auto h1 = effective_channel_inband(hd, paths, optimal_phase_config(hd, paths, m)).value;
    const auto h2 = effective_channel_inband(rot * hd, paths, optimal_phase_config(rot * hd, paths, m)).value;
    CHECK(std::abs(h2 - rot * h1) <= 1e-9 * (1.0 + std::abs(h1)));
  });
}

TEST_CASE("no IRSs leaves the direct link") {
  const PhaseConfig none = optimal_phase_config({0.3, -0.4}, {}, 8);
  CHECK(none.size() == 0);
  CHECK(effective_channel_inband({0.3, -0.4}, {}, none).value == std::complex<double>(0.3, -0.4));
  CHECK(effective_channel_oob({0.3, -0.4}, {}, none).value == std::complex<double>(0.3, -0.4));
}

TEST_CASE("property: an IRS steered to another beam contributes nothing") {
  for_all(0x1c04, 300, [](Gen& g) {
    const int m = g.pick({2, 3, 8, 16, 64});
    const int steer = g.integer(0, m - 1);
    const int other = other_beam({steer}, m, g);
    const std::vector<PathSet> to_steer{single(m, g.complex(), steer)};
    const PhaseConfig cfg = optimal_phase_config(g.complex(), to_steer, m);
    const std::complex<double> hd = g.complex();
    const std::vector<PathSet> misaligned{single(m, g.complex(), other)};
    CHECK(std::abs(effective_channel_inband(hd, misaligned, cfg).value - hd) <= 1e-12);
  });
}

TEST_CASE("property: an aligned OOB path contributes M/sqrt(L) times its gain") {
  for_all(0x1c05, 300, [](Gen& g) {
    const int m = g.pick({4, 8, 16, 64});
    const int l = g.integer(1, std::min(m - 1, 6));
    const auto inband = random_inband(g, 1, m);
    const PhaseConfig cfg = optimal_phase_config(g.complex(), inband, m);
    // Path 0 aligned with the steered beam, the rest on other beams.
    PathSet oob{m, {}, {}};
    oob.gains.push_back(g.complex());
    oob.beams.push_back(inband[0].beams[0]);
    for (int i = 1; i < l; ++i) {
      oob.gains.push_back(g.complex());
      oob.beams.push_back(other_beam({inband[0].beams[0]}, m, g));
    }
    const std::complex<double> hd = g.complex();
    const std::vector<PathSet> oobs{oob};
    const auto h = effective_channel_oob(hd, oobs, cfg).value;
    // theta = c * W_beam, so the aligned projection is c = e^{j(arg h_d - arg gamma)}.
    const std::complex<double> c = cfg.per_irs[0][0];
    const std::complex<double> expected = hd + m / std::sqrt(static_cast<double>(l)) * oob.gains[0] * c;
    CHECK(std::abs(h - expected) <= 1e-9 * (1.0 + std::abs(expected)));
  });
}

TEST_CASE("property: OOB paths that miss every steered beam leave the direct link") {
  for_all(0x1c06, 300, [](Gen& g) {
    const int s = g.integer(1, 8);
    const int m = g.pick({4, 16, 32});
    const int l = g.integer(1, 3);
    const auto inband = random_inband(g, s, m);
    const PhaseConfig cfg = optimal_phase_config(g.complex(), inband, m);
    std::vector<PathSet> oob;
    for (int i = 0; i < s; ++i) {
      PathSet p{m, {}, {}};
      for (int j = 0; j < l; ++j) {
        p.gains.push_back(g.complex());
        p.beams.push_back(other_beam({inband[static_cast<std::size_t>(i)].beams[0]}, m, g));
      }
      oob.push_back(p);
    }
    const std::complex<double> hd = g.complex();
    CHECK(std::abs(effective_channel_oob(hd, oob, cfg).value - hd) <= 1e-12);
    CHECK(alignment_count(steered_beams(inband), oob) == 0);
  });
}

TEST_CASE("property: OOB channel is linear in each path gain") {
  for_all(0x1c07, 200, [](Gen& g) {
    const int s = g.integer(1, 4);
    const int m = g.pick({4, 8});
    const int l = g.integer(1, 4);
    CounterRng& rng = g.rng();
    const PhaseConfig cfg = random_phase_config(rng, s, m);
    std::vector<PathSet> a, b, sum;
    for (int i = 0; i < s; ++i) {
      PathSet pa = sample_path_set(rng, m, 1, l, 1.0, 1.0);
      PathSet pb = pa;
      PathSet ps = pa;
      for (std::size_t j = 0; j < pa.size(); ++j) {
        pb.gains[j] = g.complex();
        ps.gains[j] = pa.gains[j] + pb.gains[j];
      }
      a.push_back(pa);
      b.push_back(pb);
      sum.push_back(ps);
    }
    const std::complex<double> zero{};
    const auto ha = effective_channel_oob(zero, a, cfg).value;
    const auto hb = effective_channel_oob(zero, b, cfg).value;
    const auto hs = effective_channel_oob(zero, sum, cfg).value;
    CHECK(std::abs(hs - (ha + hb)) <= 1e-12 * (1.0 + std::abs(ha) + std::abs(hb)));
  });
}

TEST_CASE("shape errors") {
  const int m = 8;
  const std::vector<PathSet> inband{single(m, 1.0, 0), single(m, 1.0, 1)};
  const PhaseConfig cfg = optimal_phase_config(1.0, inband, m);
  const std::vector<PathSet> one{single(m, 1.0, 0)};
  CHECK_THROWS_AS(effective_channel_inband(1.0, one, cfg), std::invalid_argument);
  const std::vector<PathSet> wrong_m{single(4, 1.0, 0), single(4, 1.0, 0)};
  CHECK_THROWS_AS(effective_channel_oob(1.0, wrong_m, cfg), std::invalid_argument);
  std::vector<PathSet> uneven{single(m, 1.0, 0), PathSet{m, {1.0, 1.0}, {0, 1}}};
  CHECK_THROWS_AS(effective_channel_oob(1.0, uneven, cfg), std::invalid_argument);
  const std::vector<PathSet> multi{PathSet{m, {1.0, 1.0}, {0, 1}}};
  CHECK_THROWS_AS(optimal_phase_config(1.0, multi, m), std::invalid_argument);
  const std::vector<int> beams{0};
  CHECK_THROWS_AS(alignment_count(beams, inband), std::invalid_argument);
}

TEST_CASE("random phase configurations") {
  CounterRng a(21, Stream::phases, 0);
  CounterRng b(21, Stream::phases, 0);
  const PhaseConfig ca = random_phase_config(a, 3, 16);
  const PhaseConfig cb = random_phase_config(b, 3, 16);
  CHECK(ca.size() == 3);
  CHECK(ca.max_modulus_error() <= 1e-12);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(ca.per_irs[s].re == cb.per_irs[s].re);
    CHECK(ca.per_irs[s].im == cb.per_irs[s].im);
  }
}

TEST_CASE("random phases give no beamforming gain") {
  // One IRS, one unit-gain path: E|M a_dot^H theta|^2 = M.
  const int m = 16;
  const int trials = 100'000;
  const std::vector<PathSet> oob{single(m, 1.0, 5)};
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(22, Stream::phases, static_cast<std::uint64_t>(t));
    acc += effective_channel_oob(0.0, oob, random_phase_config(rng, 1, m)).gain();
  }
  // The gain is roughly exponential with mean M: standard error M / sqrt(trials).
  CHECK(std::abs(acc / trials - m) <= 5.0 * m / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("alignment count examples") {
  const int m = 4;
  const std::vector<int> steer{0, 1, 2};
  std::vector<PathSet> full;
  for (int s = 0; s < 3; ++s) full.push_back(PathSet{m, {1.0, 1.0, 1.0, 1.0}, {0, 1, 2, 3}});
  CHECK(alignment_count(steer, full) == 3);
  const std::vector<PathSet> partial{single(m, 1.0, 0), single(m, 1.0, 0), single(m, 1.0, 2)};
  CHECK(alignment_count(steer, partial) == 2);
  const std::vector<PathSet> none{single(m, 1.0, 3), single(m, 1.0, 3), single(m, 1.0, 3)};
  CHECK(alignment_count(steer, none) == 0);
}

TEST_CASE("conditional OOB gain given the number of aligned IRSs") {
  // S IRSs, the first `aligned` of them have one path on the steered beam.
  const int s_total = 4, m = 32, l = 2;
  const int trials = 200'000;
  for (int aligned = 0; aligned <= s_total; aligned += 2) {
    CAPTURE(aligned);
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
      CounterRng rng(23, Stream::test, static_cast<std::uint64_t>(t) * 8 + aligned);
      std::vector<PathSet> inband, oob;
      for (int s = 0; s < s_total; ++s) {
        inband.push_back(sample_path_set(rng, m, 1, 1, 1.0, 1.0));
        const int steer = inband.back().beams[0];
        PathSet p{m, {}, {}};
        for (int j = 0; j < l; ++j) {
          p.gains.push_back(rng.complex_normal(1.0) * rng.complex_normal(1.0));
          const int miss = (steer + 1 + j) % m;
          p.beams.push_back(j == 0 && s < aligned ? steer : miss);
        }
        oob.push_back(p);
      }
      const auto hd_x = rng.complex_normal(1.0);
      const auto hd_q = rng.complex_normal(1.0);
      const PhaseConfig cfg = optimal_phase_config(hd_x, inband, m);
      REQUIRE(alignment_count(steered_beams(inband), oob) == aligned);
      acc += effective_channel_oob(hd_q, oob, cfg).gain();
    }
    const double expected = aligned * m * m / static_cast<double>(l) + 1.0;
    CHECK(acc / trials == doctest::Approx(expected).epsilon(0.02));
  }
}

TEST_CASE("alignment indicators of different IRSs are uncorrelated") {
  const int s_total = 4, m = 8, l = 2;
  const int trials = 100'000;
  std::vector<double> sum(s_total, 0.0);
  std::vector<std::vector<double>> cross(s_total, std::vector<double>(s_total, 0.0));
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(24, Stream::test, static_cast<std::uint64_t>(t));
    std::vector<double> ind(s_total);
    for (int s = 0; s < s_total; ++s) {
      const PathSet in = sample_path_set(rng, m, 1, 1, 1.0, 1.0);
      const PathSet out = sample_path_set(rng, m, 1, l, 1.0, 1.0);
      const std::vector<PathSet> one{out};
      const std::vector<int> beam{in.beams[0]};
      ind[static_cast<std::size_t>(s)] = alignment_count(beam, one);
    }
    for (int i = 0; i < s_total; ++i) {
      sum[i] += ind[i];
      for (int j = 0; j < s_total; ++j) cross[i][j] += ind[i] * ind[j];
    }
  }
  for (int i = 0; i < s_total; ++i)
    for (int j = i + 1; j < s_total; ++j) {
      const double mi = sum[i] / trials, mj = sum[j] / trials;
      const double cov = cross[i][j] / trials - mi * mj;
      const double corr = cov / std::sqrt(mi * (1 - mi) * mj * (1 - mj));
      CHECK(std::abs(corr) <= 0.01);
    }
}
