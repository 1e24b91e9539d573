#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "irsim/rng.hpp"

namespace irsim {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b) noexcept;

/// Axis-aligned rectangle in meters.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool degenerate() const noexcept { return !(x_max > x_min) || !(y_max > y_min); }
  Point center() const noexcept { return {(x_min + x_max) / 2, (y_min + y_max) / 2}; }
  double half_diagonal() const noexcept;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/**
 * Full description of one experiment.
 *
 * Counts: K in-band UEs (`num_ues_x`), Q out-of-band UEs (`num_ues_y`),
 * S IRSs with M elements each, and L cascaded paths per IRS at an
 * out-of-band UE. `num_irs == 0` is accepted and denotes the no-IRS baseline.
 *
 * `link_budget_db` is C0 * P / sigma^2: path losses are evaluated with
 * C0 = 1 and the whole budget becomes the transmit SNR. With
 * `normalize_pathloss` every path loss is exactly 1.
 */
struct ScenarioConfig {
  Point bs_x_pos{50.0, 0.0};
  Point bs_y_pos{0.0, 50.0};
  Rect ue_region{900.0, 1100.0, 900.0, 1100.0};
  int num_ues_x = 10;
  int num_ues_y = 10;
  int num_irs = 4;
  int elements_per_irs = 16;
  int paths = 2;
  double link_budget_db = 150.0;
  double alpha_bs_irs = 2.0;
  double alpha_irs_ue = 2.2;
  double alpha_bs_ue = 4.5;
  double ref_distance_m = 1.0;
  std::uint64_t slots = 10000;
  std::uint64_t master_seed = 0x5EED2024ULL;
  bool normalize_pathloss = false;

  long total_elements() const noexcept {
    return static_cast<long>(num_irs) * elements_per_irs;
  }
  double snr_linear() const noexcept;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Reads a config document. Every field is required; unknown keys are
/// rejected. Throws ConfigError.
ScenarioConfig config_from_json(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& cfg);

/// C0 * (d0 / d)^alpha with C0 given in dB. Throws std::domain_error for
/// non-positive distances.
double path_loss(double d, double alpha, double c0_db, double d0);

/**
 * `count` points uniformly spaced in angle on the half of the circle
 * circumscribing `region` that faces the origin (where the base stations
 * sit). Endpoints are included; a single IRS sits at the arc midpoint.
 */
std::vector<Point> place_irs_semicircle(int count, const Rect& region);

/// Node placement and per-link path losses. Path losses of the IRS hops are
/// averaged over the IRS sites so they do not depend on the IRS index.
struct Topology {
  std::vector<Point> irs_positions;
  std::vector<Point> ue_positions_x;
  std::vector<Point> ue_positions_y;
  std::vector<double> beta_direct_x;
  std::vector<double> beta_direct_y;
  double beta_f_x = 1.0;
  double beta_f_y = 1.0;
  std::vector<double> beta_g_x;
  std::vector<double> beta_g_y;

  double beta_r_x(std::size_t k) const { return beta_f_x * beta_g_x.at(k); }
  double beta_r_y(std::size_t q) const { return beta_f_y * beta_g_y.at(q); }

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// UE positions come from `rng`; everything else is geometry.
Topology build_topology(const ScenarioConfig& cfg, CounterRng rng);

/// Uses the config's master seed on the topology stream.
Topology build_topology(const ScenarioConfig& cfg);

}  // namespace irsim
