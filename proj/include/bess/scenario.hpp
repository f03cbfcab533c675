#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bess/architectures.hpp"
#include "bess/plaza.hpp"
#include "bess/supply.hpp"

namespace bess {

/// Configuration problems, all of them at once.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct PlazaSettings {
  double charger_max_kw = 150.0;
  double bess_max_kw = 150.0;
  double day_h = 24.0;
  /// Fraction of the pack's deliverable energy the BESS may cycle per EV.
  double cycle_dod = 0.11;
  double max_demand_factor = 2.0;  // max demand = factor x mean
  std::vector<double> arrival_rates_per_h{2.0, 1.0 / 1.5, 1.0 / 2.5};
  std::vector<double> demand_means_kwh{33.0, 50.0};
  std::vector<double> demand_stds_kwh;  // default: 10 points from 5 to 25 kWh
  std::string grid_profile_path;        // empty: built-in default profile
  GridProfile grid = GridProfile::default_profile();

  // Single-day exemplar.
  double day_arrival_rate_per_h = 1.0 / 1.5;
  double day_demand_mean_kwh = 50.0;
  double day_demand_std_kwh = 25.0;
  std::size_t day_pack_index = 0;
};

struct Scenario {
  std::string name = "default";
  std::uint64_t seed = 20220108;
  SupplyDistribution supply;
  std::size_t n_modules = 9;
  std::vector<ArchitectureConfig> architectures;
  double horizon_h = 0.0;  // resolved; default is expected intrinsic energy / bess_max_kw
  std::size_t max_span = 0;  // resolved; default n_modules - 1
  std::vector<double> lambda_grid;
  std::vector<double> r_grid;
  std::size_t n_packs = 100;
  std::size_t n_trajectories = 1000;
  PlazaSettings plaza;

  /// Built-in scenario matching the reference study.
  static Scenario defaults();
  /// Parses and validates; relative file paths resolve against `base_dir`.
  static Scenario from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static Scenario load(const std::filesystem::path& path);

  /// Throws ScenarioError listing every problem.
  void check() const;
  /// Fully resolved configuration, stable key order.
  nlohmann::ordered_json to_json() const;
  std::uint64_t config_hash() const;

  const ArchitectureConfig* find(ArchitectureKind kind) const;
  double rating_for(ArchitectureKind kind) const;
};

}  // namespace bess
