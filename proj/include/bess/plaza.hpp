#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bess/energy_flow.hpp"

namespace bess {

/// Piecewise-constant available grid power over the day.
class GridProfile {
 public:
  GridProfile() = default;
  /// Breakpoints (start hour, kW); the first must start at 0.
  GridProfile(std::vector<std::pair<double, double>> breakpoints, double end_h = 24.0);

  /// CSV with header `time_h,power_kw`. Throws std::invalid_argument on
  /// malformed input.
  static GridProfile from_csv(std::istream& in, double end_h = 24.0);
  static GridProfile from_csv_file(const std::string& path, double end_h = 24.0);
  /// 30-60 kW band: high overnight, lowest around midday.
  static GridProfile default_profile();

  double power_at(double t_h) const;
  double min_power() const;
  double end() const { return end_h_; }
  const std::vector<std::pair<double, double>>& breakpoints() const { return points_; }
  /// Time needed to draw `energy_kwh` from the profile starting at t0, or
  /// infinity if the profile never supplies it.
  double time_to_supply(double t0, double energy_kwh) const;
  std::string to_csv() const;

 private:
  std::vector<std::pair<double, double>> points_;
  double end_h_ = 24.0;
};

struct ArrivalModel {
  double rate_per_h = 1.0;  // lambda; mean standby time is 1 / lambda
};

struct DemandModel {
  double mean_kwh = 50.0;
  double std_kwh = 0.0;
  double max_kwh = 100.0;  // draws are clamped to [0, max_kwh]
};

/// The storage as seen by the plaza: one energy reservoir.
struct BessMonolith {
  double effective_capacity = 0.0;   // kWh
  double max_discharge_power = 150;  // kW
  double remaining_energy = 0.0;     // kWh
};

struct ChargeCycle {
  std::size_t index = 0;
  double start_h = 0.0;
  double demand_kwh = 0.0;
  double grid_power_kw = 0.0;       // quasistatic P_ag for this cycle
  double full_power_kw = 0.0;       // EV power while the BESS assists
  double bess_power_kw = 0.0;       // BESS share while assisting
  double full_power_h = 0.0;
  double curtailed_h = 0.0;
  double bess_delivered_kwh = 0.0;
  double recharge_h = 0.0;
  double unmet_kwh = 0.0;
  double bess_energy_at_start = 0.0;
  bool truncated = false;           // runs past the simulation horizon

  double charging_h() const { return full_power_h + curtailed_h; }
  double end_h() const { return start_h + full_power_h + curtailed_h + recharge_h; }
};

struct SeriesSample {
  double t_h = 0.0;
  double p_grid = 0.0;  // available grid power, kW
  double p_bess = 0.0;  // discharge positive, recharge negative, kW
  double e_bess = 0.0;  // kWh stored
  double p_ev = 0.0;    // kW
};

struct DayTrajectory {
  std::vector<ChargeCycle> cycles;
  double horizon_h = 24.0;
  double capacity_kwh = 0.0;
  GridProfile grid;

  /// Instantaneous state sampled every `step_h` from 0 to the horizon.
  std::vector<SeriesSample> series(double step_h = 1.0 / 60.0) const;
  std::string cycles_json() const;
  std::string series_csv(double step_h = 1.0 / 60.0) const;
};

/// Three-actor plaza over one day. Each cycle: grid power sampled at start and
/// held; EV at charger_max with the BESS covering the difference until the EV
/// is full or the BESS is empty; then grid-only (curtailed) charging; then a
/// full recharge at the held grid power. Arrivals only occur in standby.
DayTrajectory simulate_day(const BessMonolith& bess, const GridProfile& grid,
                           const ArrivalModel& arrivals, const DemandModel& demand,
                           double charger_max_kw, double horizon_h, std::uint64_t seed);

/// Energy the architecture can deliver per full discharge, kWh.
double effective_capacity(const FlowNetwork& net);

struct CurtailmentStats {
  bool empty = true;
  double mean_minutes = 0.0;
  double max_minutes = 0.0;
};

CurtailmentStats curtailed_minutes_per_ev(const DayTrajectory& traj);

}  // namespace bess
