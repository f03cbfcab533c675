#include "bess/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace bess {

double energy_utilization(double delivered, double intrinsic_capacity) {
  if (!(intrinsic_capacity > 0.0))
    throw std::domain_error("energy_utilization: intrinsic capacity must be > 0");
  if (delivered < 0.0) throw std::domain_error("energy_utilization: delivered energy < 0");
  return delivered / intrinsic_capacity;
}

double energy_utilization(double delivered, const Pack& batteries) {
  return energy_utilization(delivered, total_capacity(batteries));
}

double normalized_rating(double aggregate_power_kw, double intrinsic_kwh, double horizon_h) {
  return aggregate_power_kw * horizon_h / intrinsic_kwh;
}

double system_efficiency(double converter_efficiency, double normalized_rating) {
  return 1.0 - (1.0 - converter_efficiency) * normalized_rating;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::domain_error("mean: no samples");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::span<const double> xs, double p) {
  if (xs.empty()) throw std::domain_error("quantile: no samples");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile: p outside [0, 1]");
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  const double h = (static_cast<double>(s.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double interdecile_range(std::span<const double> xs) {
  if (xs.size() < 10) throw std::domain_error("interdecile_range: need at least 10 samples");
  return quantile(xs, 0.9) - quantile(xs, 0.1);
}

double grid_ev_energy_gap(double ev_demand_kwh, double grid_power_kw, double interval_h) {
  if (interval_h < 0.0) throw std::domain_error("grid_ev_energy_gap: negative interval");
  return ev_demand_kwh - grid_power_kw * interval_h;
}

double derating_factor(double mu, double sigma) {
  if (mu == 0.0) throw std::domain_error("derating_factor: mean output is zero");
  return std::clamp((mu - 3.0 * sigma) / mu, 0.0, 1.0);
}

double derating_factor(std::span<const double> outputs) {
  if (outputs.size() < 2) throw std::domain_error("derating_factor: need at least 2 samples");
  return derating_factor(mean(outputs), stddev(outputs));
}

double captured_value(double derating, double utilization, double expected_intrinsic_kwh) {
  return derating * utilization * expected_intrinsic_kwh;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["utilization"] = utilization;
  j["normalized_rating"] = normalized_rating;
  j["system_efficiency"] = system_efficiency;
  j["idr"] = idr;
  j["sigma"] = sigma;
  j["derating"] = derating;
  j["captured_value_kwh"] = captured_value;
  j["intrinsic_capacity_kwh"] = intrinsic_capacity;
  return j.dump(2);
}

}  // namespace bess
