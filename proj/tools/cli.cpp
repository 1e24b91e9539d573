#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "irsim/analysis.hpp"
#include "irsim/channel.hpp"
#include "irsim/errors.hpp"
#include "irsim/irs_control.hpp"
#include "irsim/kernels.hpp"
#include "irsim/montecarlo.hpp"
#include "irsim/scenario.hpp"

#ifndef IRSIM_VERSION
#define IRSIM_VERSION "0.0.0"
#endif

namespace irsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class Int>
std::string format_number(Int x)
  requires std::is_integral_v<Int>
{
  return std::to_string(x);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

long parse_long(const std::string& token, const char* what) {
  long v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
    throw UsageError(std::string(what) + ": '" + token + "' is not an integer");
  return v;
}

// Accepts a decimal or a fraction "a/b".
double parse_fraction(const std::string& token, const char* what) {
  const auto slash = token.find('/');
  auto parse = [&](std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
      throw UsageError(std::string(what) + ": '" + token + "' is not a number");
    return v;
  };
  if (slash == std::string::npos) return parse(token);
  const std::string_view sv(token);
  const double den = parse(sv.substr(slash + 1));
  if (den == 0.0) throw UsageError(std::string(what) + ": zero denominator in '" + token + "'");
  return parse(sv.substr(0, slash)) / den;
}

// S token: a non-negative integer or "star" for the design-rule count.
std::optional<long> parse_s_token(const std::string& token) {
  if (token == "star" || token == "S*" || token == "s*") return std::nullopt;
  const long s = parse_long(token, "S");
  if (s < 0) throw UsageError("S must be >= 0");
  return s;
}

long paths_for_delta(long n, double delta) {
  if (delta < 0.0) throw UsageError("delta must be >= 0");
  return std::max(1L, std::lround(std::pow(static_cast<double>(n), delta)));
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> slots;
  unsigned workers = 1;
  std::string out_dir;
  std::string isa = "auto";
};

struct Context {
  ScenarioConfig cfg;
  RunOptions opts;
  fs::path out_dir;
  std::string started_at;
};

Context make_context(const Globals& g) {
  Context ctx;
  ctx.started_at = utc_timestamp();
  ctx.cfg = g.config_path.empty() ? ScenarioConfig{} : load_config(g.config_path);
  if (g.seed) ctx.cfg.master_seed = *g.seed;
  if (g.slots) {
    if (*g.slots == 0) throw UsageError("--slots must be >= 1");
    ctx.cfg.slots = *g.slots;
  }
  ctx.cfg.validate();
  if (g.workers == 0) throw UsageError("--workers must be >= 1");
  ctx.opts.workers = g.workers;

  if (g.isa == "scalar") {
    kernels::select_isa(kernels::Isa::scalar);
  } else if (g.isa == "avx2") {
    if (!kernels::select_isa(kernels::Isa::avx2))
      throw UsageError("--isa avx2 is not available on this machine");
  } else if (g.isa != "auto") {
    throw UsageError("--isa must be auto, scalar or avx2");
  }

  if (!g.out_dir.empty()) {
    ctx.out_dir = g.out_dir;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    ctx.out_dir = env;
  } else {
    ctx.out_dir = "results";
  }
  return ctx;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("CsvWriter: wrong column count");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ << ',';
      text_ << cells[i];
    }
    text_ << '\n';
    ++rows_;
  }

  void save(const fs::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text_.str();
  }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::ostringstream text_;
};

void write_outputs(const Context& ctx, const std::string& command, const json& parameters,
                   const CsvWriter& csv, std::ostream& out) {
  fs::create_directories(ctx.out_dir);
  const fs::path csv_path = ctx.out_dir / (command + ".csv");
  const fs::path manifest_path = ctx.out_dir / (command + ".manifest.json");
  csv.save(csv_path);
  const json manifest{
      {"command", command},
      {"config", to_json(ctx.cfg)},
      {"seed", ctx.cfg.master_seed},
      {"parameters", parameters},
      {"tool_version", IRSIM_VERSION},
      {"isa", std::string(kernels::isa_name(kernels::active_isa()))},
      {"workers", ctx.opts.workers},
      {"started_at", ctx.started_at},
      {"finished_at", utc_timestamp()},
      {"outputs", json::array({csv_path.filename().string()})},
  };
  std::ofstream f(manifest_path);
  if (!f) throw std::runtime_error("cannot write '" + manifest_path.string() + "'");
  f << manifest.dump(2) << '\n';
  out << "wrote " << csv_path.string() << " and " << manifest_path.string() << '\n';
}

int cmd_sweep_se(const Globals& g, const std::vector<std::string>& n_tokens,
                 const std::vector<std::string>& s_tokens, std::ostream& out) {
  if (n_tokens.empty()) throw UsageError("empty N list");
  if (s_tokens.empty()) throw UsageError("empty S list");
  std::vector<long> ns;
  for (const auto& t : n_tokens) {
    const long n = parse_long(t, "N");
    if (n < 1) throw UsageError("N must be >= 1");
    ns.push_back(n);
  }
  std::vector<std::optional<long>> ss;
  for (const auto& t : s_tokens) ss.push_back(parse_s_token(t));

  Context ctx = make_context(g);
  // Resolve and check the whole grid before running anything.
  struct Point {
    long n, s;
  };
  std::vector<Point> grid;
  for (long n : ns) {
    for (const auto& token : ss) {
      const long s = token ? *token : design_rule(n, ctx.cfg.paths).s_star;
      if (s < 1) throw UsageError("sweep-se: S must be >= 1");
      if (n % s != 0)
        throw UsageError("N = " + std::to_string(n) + " is not divisible by S = " + std::to_string(s));
      grid.push_back({n, s});
    }
  }

  CsvWriter csv({"N", "S", "M", "se_x_mc", "se_x_cf", "se_y_mc", "se_y_cf", "stderr_x", "stderr_y"});
  for (const auto& [n, s] : grid) {
    ScenarioConfig cfg = ctx.cfg;
    cfg.num_irs = static_cast<int>(s);
    cfg.elements_per_irs = static_cast<int>(n / s);
    const SweepResult r = run_sum_se(cfg, ctx.opts);
    csv.row({format_number(n), format_number(s), format_number(n / s), format_number(r.inband.mean),
             format_number(r.inband_closed_form), format_number(r.oob.mean),
             format_number(r.oob_closed_form), format_number(r.inband.std_error),
             format_number(r.oob.std_error)});
  }
  write_outputs(ctx, "sweep-se", json{{"n", n_tokens}, {"s", s_tokens}}, csv, out);
  return kOk;
}

int cmd_outage(const Globals& g, long n, const std::vector<std::string>& s_tokens,
               const std::vector<std::string>& delta_tokens, double rho, std::uint64_t trials,
               std::ostream& out) {
  if (s_tokens.empty()) throw UsageError("empty S list");
  if (delta_tokens.empty()) throw UsageError("empty delta list");
  if (n < 1) throw UsageError("N must be >= 1");
  if (!(rho >= 0.0)) throw UsageError("rho must be >= 0");
  if (trials < 1) throw UsageError("--trials must be >= 1");
  std::vector<double> deltas;
  for (const auto& t : delta_tokens) deltas.push_back(parse_fraction(t, "delta"));

  Context ctx = make_context(g);
  std::vector<std::pair<double, long>> grid;
  for (double delta : deltas) {
    const long l = paths_for_delta(n, delta);
    for (const auto& t : s_tokens) {
      const auto token = parse_s_token(t);
      const long s = token ? *token : design_rule(n, l).s_star;
      if (s < 1) throw UsageError("outage: S must be >= 1");
      if (n % s != 0)
        throw UsageError("N = " + std::to_string(n) + " is not divisible by S = " + std::to_string(s));
      grid.emplace_back(delta, s);
    }
  }

  CsvWriter csv({"S", "delta", "L", "p_out_mc", "ci_lo", "ci_hi", "p_out_cf"});
  for (const auto& [delta, s] : grid) {
    ScenarioConfig cfg = ctx.cfg;
    cfg.num_irs = static_cast<int>(s);
    cfg.elements_per_irs = static_cast<int>(n / s);
    cfg.paths = static_cast<int>(paths_for_delta(n, delta));
    const OutageReport r = run_outage(cfg, rho, trials, ctx.opts);
    csv.row({format_number(s), format_number(delta), format_number(cfg.paths),
             format_number(r.estimate), format_number(r.ci_lo), format_number(r.ci_hi),
             format_number(r.closed_form)});
  }
  write_outputs(ctx, "outage",
                json{{"n", n}, {"s", s_tokens}, {"delta", delta_tokens}, {"rho", rho}, {"trials", trials}},
                csv, out);
  return kOk;
}

int cmd_prelog(const Globals& g, long n, const std::vector<std::string>& s_tokens,
               const std::vector<std::string>& delta_tokens, std::ostream& out) {
  if (s_tokens.empty()) throw UsageError("empty S list");
  if (delta_tokens.empty()) throw UsageError("empty delta list");
  if (n < 2) throw UsageError("prelog needs N >= 2");
  std::vector<double> deltas;
  for (const auto& t : delta_tokens) deltas.push_back(parse_fraction(t, "delta"));

  Context ctx = make_context(g);
  std::vector<std::pair<double, long>> grid;
  for (double delta : deltas) {
    const long l = paths_for_delta(n, delta);
    for (const auto& t : s_tokens) {
      const auto token = parse_s_token(t);
      const long s = token ? *token : design_rule(n, l).s_star;
      if (s > 0 && n % s != 0)
        throw UsageError("N = " + std::to_string(n) + " is not divisible by S = " + std::to_string(s));
      grid.emplace_back(delta, s);
    }
  }

  CsvWriter csv({"S", "delta", "tau_oob", "tau_inband", "s_star"});
  for (const auto& [delta, s] : grid) {
    const long l = paths_for_delta(n, delta);
    const long s_star = design_rule(n, l).s_star;
    double tau_oob = 0.0;
    double tau_inband = 0.0;
    // Without IRSs the SE does not grow with N at all.
    if (s > 0) {
      ScenarioConfig cfg = ctx.cfg;
      cfg.num_irs = static_cast<int>(s);
      cfg.elements_per_irs = static_cast<int>(n / s);
      cfg.paths = static_cast<int>(l);
      const SweepResult r = run_sum_se(cfg, ctx.opts);
      tau_oob = prelog_factor(r.oob.mean, n);
      tau_inband = prelog_factor(r.inband.mean, n);
    }
    csv.row({format_number(s), format_number(delta), format_number(tau_oob),
             format_number(tau_inband), format_number(s_star)});
  }
  write_outputs(ctx, "prelog", json{{"n", n}, {"s", s_tokens}, {"delta", delta_tokens}}, csv, out);
  return kOk;
}

int cmd_design(long n, long l, std::ostream& out) {
  if (n < 1 || l < 1) throw UsageError("design needs N >= 1 and L >= 1");
  const DesignRule d = design_rule(n, l);
  out << json{{"delta_star", d.delta_star}, {"m_star", d.m_star}, {"s_star", d.s_star}}.dump()
      << '\n';
  return kOk;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

Check check_orthogonality(double scale) {
  const double tol = 1e-12 * scale;
  double worst = 0.0;
  for (int m : {7, 8, 16, 64}) {
    const AngleBook book(m);
    std::vector<std::vector<std::complex<double>>> rows;
    for (int i = 0; i < m; ++i) rows.push_back(array_response(m, book[i]));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        std::complex<double> acc = 0.0;
        for (int n = 0; n < m; ++n) acc += std::conj(rows[i][n]) * rows[j][n];
        worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
      }
    }
  }
  return {"orthogonality", worst <= tol,
          "max deviation from identity " + format_number(worst) + " (tol " + format_number(tol) + ")"};
}

Check check_binomial_fit(const ScenarioConfig& base, const RunOptions& opts, double scale) {
  ScenarioConfig cfg = base;
  cfg.num_irs = std::max(cfg.num_irs, 1);
  const double tol = 0.02 * scale;
  const AlignmentHistogram h = run_alignment(cfg, 20000, opts);
  return {"binomial-fit", h.tv_exact <= tol,
          "S=" + std::to_string(h.s) + " M=" + std::to_string(h.m) + " L=" + std::to_string(h.l) +
              " TV " + format_number(h.tv_exact) + " (tol " + format_number(tol) + ")"};
}

Check check_i0_oracle(double scale) {
  // Reference values computed independently to 18 digits.
  constexpr double i0_111 = 0.207533523434828773;
  constexpr double i0_h11 = 0.274671152024347248;
  const double tol = 1e-8 * scale;
  double worst = std::abs(i0_integral(1.0, 1.0, 1.0) / i0_111 - 1.0);
  worst = std::max(worst, std::abs(i0_integral(0.5, 1.0, 1.0) / i0_h11 - 1.0));
  for (double c1 : {0.1, 1.0, 10.0})
    for (double c2 : {0.1, 1.0, 10.0})
      worst = std::max(worst, std::abs(i0_integral(0.0, c1, c2) / (c2 * std::exp(-c1 / c2)) - 1.0));
  return {"i0-oracle", worst <= tol,
          "max relative error " + format_number(worst) + " (tol " + format_number(tol) + ")"};
}

Check check_optimal_gain(const ScenarioConfig& base, double scale) {
  ScenarioConfig cfg = base;
  cfg.num_irs = std::max(cfg.num_irs, 1);
  const double tol = 1e-9 * scale;
  const SlotSimulator sim(cfg);
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const SlotOutcome o = sim.run(t);
    double predicted = std::abs(o.inband.direct);
    for (const PathSet& p : o.inband.per_irs) predicted += cfg.elements_per_irs * std::abs(p.gains[0]);
    const double got = std::abs(o.h_inband.value);
    worst = std::max(worst, std::abs(got - predicted) / std::max(predicted, 1e-300));
  }
  return {"optimal-gain", worst <= tol,
          "max relative error " + format_number(worst) + " over 1000 slots (tol " +
              format_number(tol) + ")"};
}

int cmd_validate(const Globals& g, double scale, std::ostream& out) {
  if (!(scale >= 0.0)) throw UsageError("--tolerance-scale must be >= 0");
  const Context ctx = make_context(g);
  const std::vector<Check> checks{check_orthogonality(scale),
                                  check_binomial_fit(ctx.cfg, ctx.opts, scale),
                                  check_i0_oracle(scale), check_optimal_gain(ctx.cfg, scale)};
  bool all = true;
  for (const Check& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.pass;
  }
  return all ? kOk : kValidationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed IRS out-of-band impact simulator", "irsim"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", IRSIM_VERSION);

  Globals g;
  std::uint64_t seed = 0;
  std::uint64_t slots = 0;
  app.add_option("--config", g.config_path, "Scenario JSON (defaults to the built-in scenario)");
  auto* seed_opt = app.add_option("--seed", seed, "Override the master seed");
  auto* slots_opt = app.add_option("--slots", slots, "Override the number of slots per point");
  app.add_option("--workers", g.workers, "Worker threads (results do not depend on it)");
  app.add_option("--out-dir", g.out_dir,
                 std::string("Output directory (default $") + kOutDirEnv + " or ./results)");
  app.add_option("--isa", g.isa, "Kernel variant: auto, scalar or avx2");

  std::vector<std::string> n_list, delta_list;
  std::vector<std::string> sweep_s{"1", "4", "star"};
  std::vector<std::string> outage_s{"1", "2", "4", "8", "16", "32", "64"};
  std::vector<std::string> prelog_s{"0", "1", "2", "4", "8", "16", "32", "64", "128"};
  long n_single = 0;
  double rho = 0.5;
  std::uint64_t trials = 100000;
  double tolerance_scale = 1.0;
  long design_n = 0, design_l = 0;

  auto* sweep = app.add_subcommand("sweep-se", "Ergodic sum-SE of both operators over an (N, S) grid");
  sweep->add_option("--n", n_list, "Total element counts N")->required()->delimiter(',');
  sweep->add_option("--s", sweep_s, "IRS counts S; 'star' is the design-rule S*")->capture_default_str()->delimiter(',');

  auto* outage = app.add_subcommand("outage", "OOB outage probability vs S");
  outage->add_option("--n", n_single, "Total element count N (default 512)");
  outage->add_option("--s", outage_s, "IRS counts S")->capture_default_str()->delimiter(',');
  outage->add_option("--delta", delta_list, "Path exponents delta, L = round(N^delta)")->delimiter(',');
  outage->add_option("--rho", rho, "Outage threshold on |h|^2")->capture_default_str();
  outage->add_option("--trials", trials, "Trials per point")->capture_default_str();

  auto* prelog = app.add_subcommand("prelog", "Pre-log factor of both operators vs S");
  prelog->add_option("--n", n_single, "Total element count N (default 128)");
  prelog->add_option("--s", prelog_s, "IRS counts S; 0 is the no-IRS baseline")->capture_default_str()->delimiter(',');
  prelog->add_option("--delta", delta_list, "Path exponents delta; fractions like 1/7 allowed")
      ->delimiter(',');

  auto* design = app.add_subcommand("design", "Minimum IRS count for maximal OOB SE scaling");
  design->add_option("N", design_n, "Total element count")->required();
  design->add_option("L", design_l, "Paths per IRS")->required();

  auto* validate = app.add_subcommand("validate", "Fast invariant suite");
  validate->add_option("--tolerance-scale", tolerance_scale, "Multiplier on every check tolerance")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }
  if (seed_opt->count()) g.seed = seed;
  if (slots_opt->count()) g.slots = slots;

  try {
    if (sweep->parsed()) return cmd_sweep_se(g, n_list, sweep_s, out);
    if (outage->parsed()) {
      if (delta_list.empty()) delta_list = {"0.2", "0.5"};
      return cmd_outage(g, n_single ? n_single : 512, outage_s, delta_list, rho, trials, out);
    }
    if (prelog->parsed()) {
      if (delta_list.empty()) delta_list = {"1/7", "2/7", "3/7"};
      return cmd_prelog(g, n_single ? n_single : 128, prelog_s, delta_list, out);
    }
    if (design->parsed()) return cmd_design(design_n, design_l, out);
    if (validate->parsed()) return cmd_validate(g, tolerance_scale, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsageError;
}

}  // namespace irsim::cli
