#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bess {

/// Gaussian statistics of the usable energy of retired modules.
struct SupplyDistribution {
  double mean_capacity = 37.5;  // kWh, mean of pack capacity x depth of discharge
  double std_capacity = 9.375;  // kWh
  double depth_of_discharge = 1.0;
  double nominal_voltage = 50.0;  // V

  double heterogeneity() const { return std_capacity / mean_capacity; }
  /// Throws std::invalid_argument when the invariants do not hold.
  void check() const;
};

struct BatteryModule {
  std::size_t id = 0;
  double capacity = 0.0;  // kWh
  double voltage = 50.0;  // V
};

using Pack = std::vector<BatteryModule>;

/// Capacity profile representing the expected N-module pack, ascending.
struct ExpectedSet {
  Pack batteries;
  double total_capacity() const;
};

double total_capacity(const Pack& pack);

/// Usable energy of a pack: capacity scaled by depth of discharge.
double usable_energy(double pack_capacity, double dod);

/// Mid-quantile stratification of the supply Gaussian: module i gets
/// InverseCDF((i - 0.5) / n), clamped at zero.
ExpectedSet flatten_distribution(const SupplyDistribution& dist, std::size_t n);

/// n independent draws truncated at zero, sorted ascending. Pure function of
/// (dist, n, seed).
Pack sample_pack(const SupplyDistribution& dist, std::size_t n, std::uint64_t seed);

}  // namespace bess
