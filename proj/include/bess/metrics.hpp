#pragma once

#include <span>
#include <string>
#include <vector>

#include "bess/supply.hpp"

namespace bess {

/// Delivered energy over intrinsic stored energy.
double energy_utilization(double delivered, const Pack& batteries);
double energy_utilization(double delivered, double intrinsic_capacity);

/// P * T / E: aggregate converter rating normalized by intrinsic energy.
double normalized_rating(double aggregate_power_kw, double intrinsic_kwh, double horizon_h);

/// 1 - (1 - eta_c) R for flat converter efficiency.
double system_efficiency(double converter_efficiency, double normalized_rating);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 samples.
double stddev(std::span<const double> xs);
/// Linear-interpolated quantile (R type 7). p in [0, 1].
double quantile(std::span<const double> xs, double p);
/// p90 - p10. Requires at least 10 samples.
double interdecile_range(std::span<const double> xs);

/// Demand not covered by the grid over the charging interval.
double grid_ev_energy_gap(double ev_demand_kwh, double grid_power_kw, double interval_h);

/// (mu - 3 sigma) / mu, clamped to [0, 1].
double derating_factor(double mu, double sigma);
double derating_factor(std::span<const double> outputs);

double captured_value(double derating, double utilization, double expected_intrinsic_kwh);

struct MetricReport {
  double utilization = 0.0;
  double normalized_rating = 0.0;
  double system_efficiency = 1.0;
  double idr = 0.0;
  double sigma = 0.0;
  double derating = 1.0;
  double captured_value = 0.0;
  double intrinsic_capacity = 0.0;

  std::string to_json() const;
};

}  // namespace bess
