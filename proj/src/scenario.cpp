#include "irsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "irsim/errors.hpp"

namespace irsim {

using nlohmann::json;

double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double Rect::half_diagonal() const noexcept {
  return 0.5 * std::hypot(x_max - x_min, y_max - y_min);
}

double ScenarioConfig::snr_linear() const noexcept {
  return std::pow(10.0, link_budget_db / 10.0);
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* message) {
    if (!ok) throw ConfigError(message, field);
  };
  require(num_ues_x >= 1, "num_ues_x", "must be >= 1");
  require(num_ues_y >= 1, "num_ues_y", "must be >= 1");
  require(num_irs >= 0, "num_irs", "must be >= 0");
  require(elements_per_irs >= 1, "elements_per_irs", "must be >= 1");
  require(paths >= 1, "paths", "must be >= 1");
  require(!ue_region.degenerate(), "ue_region", "must have x_max > x_min and y_max > y_min");
  require(std::isfinite(link_budget_db), "link_budget_db", "must be finite");
  require(alpha_bs_irs > 0, "alpha_bs_irs", "must be > 0");
  require(alpha_irs_ue > 0, "alpha_irs_ue", "must be > 0");
  require(alpha_bs_ue > 0, "alpha_bs_ue", "must be > 0");
  require(ref_distance_m > 0, "ref_distance_m", "must be > 0");
  require(slots >= 1, "slots", "must be >= 1");
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "bs_x_pos",     "bs_y_pos",         "ue_region",      "num_ues_x",    "num_ues_y",
      "num_irs",      "elements_per_irs", "paths",          "link_budget_db", "alpha_bs_irs",
      "alpha_irs_ue", "alpha_bs_ue",      "ref_distance_m", "slots",        "master_seed",
      "normalize_pathloss"};
  return keys;
}

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError("missing required field", key);
  return *it;
}

double number(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number()) throw ConfigError("expected a number", key);
  return v.get<double>();
}

int integer(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number_integer()) throw ConfigError("expected an integer", key);
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError("integer out of range", key);
  return static_cast<int>(x);
}

std::uint64_t unsigned_integer(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number_unsigned()) throw ConfigError("expected a non-negative integer", key);
  return v.get<std::uint64_t>();
}

Point point(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError("expected [x, y] in meters", key);
  return {v[0].get<double>(), v[1].get<double>()};
}

Rect rect(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_object()) throw ConfigError("expected {x_min, x_max, y_min, y_max}", key);
  Rect r;
  std::size_t seen = 0;
  for (const auto& [name, value] : v.items()) {
    if (!value.is_number()) throw ConfigError("expected a number for " + name, key);
    const double x = value.get<double>();
    if (name == "x_min") r.x_min = x;
    else if (name == "x_max") r.x_max = x;
    else if (name == "y_min") r.y_min = x;
    else if (name == "y_max") r.y_max = x;
    else throw ConfigError("unknown key '" + name + "'", key);
    ++seen;
  }
  if (seen != 4) throw ConfigError("expected {x_min, x_max, y_min, y_max}", key);
  return r;
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown key", key);
  }
  ScenarioConfig cfg;
  cfg.bs_x_pos = point(doc, "bs_x_pos");
  cfg.bs_y_pos = point(doc, "bs_y_pos");
  cfg.ue_region = rect(doc, "ue_region");
  cfg.num_ues_x = integer(doc, "num_ues_x");
  cfg.num_ues_y = integer(doc, "num_ues_y");
  cfg.num_irs = integer(doc, "num_irs");
  cfg.elements_per_irs = integer(doc, "elements_per_irs");
  cfg.paths = integer(doc, "paths");
  cfg.link_budget_db = number(doc, "link_budget_db");
  cfg.alpha_bs_irs = number(doc, "alpha_bs_irs");
  cfg.alpha_irs_ue = number(doc, "alpha_irs_ue");
  cfg.alpha_bs_ue = number(doc, "alpha_bs_ue");
  cfg.ref_distance_m = number(doc, "ref_distance_m");
  cfg.slots = unsigned_integer(doc, "slots");
  cfg.master_seed = unsigned_integer(doc, "master_seed");
  const json& norm = field(doc, "normalize_pathloss");
  if (!norm.is_boolean()) throw ConfigError("expected true or false", "normalize_pathloss");
  cfg.normalize_pathloss = norm.get<bool>();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(doc);
}

json to_json(const ScenarioConfig& cfg) {
  return json{
      {"bs_x_pos", {cfg.bs_x_pos.x, cfg.bs_x_pos.y}},
      {"bs_y_pos", {cfg.bs_y_pos.x, cfg.bs_y_pos.y}},
      {"ue_region",
       {{"x_min", cfg.ue_region.x_min},
        {"x_max", cfg.ue_region.x_max},
        {"y_min", cfg.ue_region.y_min},
        {"y_max", cfg.ue_region.y_max}}},
      {"num_ues_x", cfg.num_ues_x},
      {"num_ues_y", cfg.num_ues_y},
      {"num_irs", cfg.num_irs},
      {"elements_per_irs", cfg.elements_per_irs},
      {"paths", cfg.paths},
      {"link_budget_db", cfg.link_budget_db},
      {"alpha_bs_irs", cfg.alpha_bs_irs},
      {"alpha_irs_ue", cfg.alpha_irs_ue},
      {"alpha_bs_ue", cfg.alpha_bs_ue},
      {"ref_distance_m", cfg.ref_distance_m},
      {"slots", cfg.slots},
      {"master_seed", cfg.master_seed},
      {"normalize_pathloss", cfg.normalize_pathloss},
  };
}

double path_loss(double d, double alpha, double c0_db, double d0) {
  if (!(d > 0.0)) throw std::domain_error("path_loss: distance must be positive");
  if (!(d0 > 0.0)) throw std::domain_error("path_loss: reference distance must be positive");
  const double c0 = std::pow(10.0, c0_db / 10.0);
  if (d == d0) return c0;
  return c0 * std::pow(d0 / d, alpha);
}

std::vector<Point> place_irs_semicircle(int count, const Rect& region) {
  if (count < 1) throw std::domain_error("place_irs_semicircle: count must be >= 1");
  if (region.degenerate()) throw std::domain_error("place_irs_semicircle: degenerate region");
  const Point c = region.center();
  const double r = region.half_diagonal();
  const double mid = std::atan2(-c.y, -c.x);  // direction from the center to the origin
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back({c.x + r * std::cos(mid), c.y + r * std::sin(mid)});
    return out;
  }
  const double start = mid - std::numbers::pi / 2;
  const double step = std::numbers::pi / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double a = start + step * i;
    out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return out;
}

namespace {

Point uniform_point(CounterRng& rng, const Rect& r) {
  const double x = r.x_min + (r.x_max - r.x_min) * rng.uniform();
  const double y = r.y_min + (r.y_max - r.y_min) * rng.uniform();
  return {x, y};
}

// Mean path loss between `from` and every IRS site.
double mean_irs_loss(Point from, const std::vector<Point>& sites, double alpha, double d0) {
  double acc = 0.0;
  for (const Point& s : sites) acc += path_loss(distance(from, s), alpha, 0.0, d0);
  return acc / static_cast<double>(sites.size());
}

}  // namespace

Topology build_topology(const ScenarioConfig& cfg, CounterRng rng) {
  cfg.validate();
  Topology topo;
  const auto K = static_cast<std::size_t>(cfg.num_ues_x);
  const auto Q = static_cast<std::size_t>(cfg.num_ues_y);
  for (std::size_t k = 0; k < K; ++k) topo.ue_positions_x.push_back(uniform_point(rng, cfg.ue_region));
  for (std::size_t q = 0; q < Q; ++q) topo.ue_positions_y.push_back(uniform_point(rng, cfg.ue_region));

  if (cfg.num_irs > 0) topo.irs_positions = place_irs_semicircle(cfg.num_irs, cfg.ue_region);

  if (cfg.normalize_pathloss) {
    topo.beta_direct_x.assign(K, 1.0);
    topo.beta_direct_y.assign(Q, 1.0);
    topo.beta_g_x.assign(K, 1.0);
    topo.beta_g_y.assign(Q, 1.0);
    topo.beta_f_x = topo.beta_f_y = 1.0;
    return topo;
  }

  // Without IRSs the reflected-link losses are never used; evaluate them at
  // the single-IRS site so they stay well defined.
  const std::vector<Point> sites =
      cfg.num_irs > 0 ? topo.irs_positions : place_irs_semicircle(1, cfg.ue_region);
  const double d0 = cfg.ref_distance_m;
  topo.beta_f_x = mean_irs_loss(cfg.bs_x_pos, sites, cfg.alpha_bs_irs, d0);
  topo.beta_f_y = mean_irs_loss(cfg.bs_y_pos, sites, cfg.alpha_bs_irs, d0);
  for (const Point& ue : topo.ue_positions_x) {
    topo.beta_direct_x.push_back(path_loss(distance(cfg.bs_x_pos, ue), cfg.alpha_bs_ue, 0.0, d0));
    topo.beta_g_x.push_back(mean_irs_loss(ue, sites, cfg.alpha_irs_ue, d0));
  }
  for (const Point& ue : topo.ue_positions_y) {
    topo.beta_direct_y.push_back(path_loss(distance(cfg.bs_y_pos, ue), cfg.alpha_bs_ue, 0.0, d0));
    topo.beta_g_y.push_back(mean_irs_loss(ue, sites, cfg.alpha_irs_ue, d0));
  }
  return topo;
}

Topology build_topology(const ScenarioConfig& cfg) {
  return build_topology(cfg, CounterRng(cfg.master_seed, Stream::topology, 0));
}

}  // namespace irsim
