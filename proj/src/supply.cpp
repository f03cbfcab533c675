#include "bess/supply.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace bess {

void SupplyDistribution::check() const {
  if (!(mean_capacity > 0.0))
    throw std::invalid_argument("supply: mean_kwh must be > 0");
  if (!(std_capacity >= 0.0))
    throw std::invalid_argument("supply: std_kwh must be >= 0");
  if (heterogeneity() > 0.5)
    throw std::invalid_argument("supply: heterogeneity std/mean must be <= 0.5");
  if (!(depth_of_discharge > 0.0 && depth_of_discharge <= 1.0))
    throw std::invalid_argument("supply: dod must be in (0, 1]");
  if (!(nominal_voltage > 0.0))
    throw std::invalid_argument("supply: voltage_v must be > 0");
}

double total_capacity(const Pack& pack) {
  return std::accumulate(pack.begin(), pack.end(), 0.0,
                         [](double acc, const BatteryModule& b) { return acc + b.capacity; });
}

double ExpectedSet::total_capacity() const { return bess::total_capacity(batteries); }

double usable_energy(double pack_capacity, double dod) {
  if (!(dod > 0.0 && dod <= 1.0))
    throw std::domain_error("usable_energy: depth of discharge must be in (0, 1]");
  if (pack_capacity < 0.0)
    throw std::domain_error("usable_energy: pack capacity must be >= 0");
  return pack_capacity * dod;
}

ExpectedSet flatten_distribution(const SupplyDistribution& dist, std::size_t n) {
  if (n < 2) throw std::domain_error("flatten_distribution: n must be >= 2");
  ExpectedSet out;
  out.batteries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double cap = dist.mean_capacity;
    if (dist.std_capacity > 0.0) {
      boost::math::normal_distribution<double> g(dist.mean_capacity, dist.std_capacity);
      const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      cap = boost::math::quantile(g, p);
    }
    out.batteries.push_back({i, std::max(0.0, cap), dist.nominal_voltage});
  }
  // Quantiles are monotone already; the sort only fixes ulp-level noise.
  std::stable_sort(out.batteries.begin(), out.batteries.end(),
                   [](const auto& a, const auto& b) { return a.capacity < b.capacity; });
  for (std::size_t i = 0; i < n; ++i) out.batteries[i].id = i;
  return out;
}

Pack sample_pack(const SupplyDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::domain_error("sample_pack: n must be >= 2");
  boost::random::mt19937_64 engine(seed);
  std::vector<double> caps(n, dist.mean_capacity);
  if (dist.std_capacity > 0.0) {
    boost::random::normal_distribution<double> g(dist.mean_capacity, dist.std_capacity);
    for (double& c : caps) c = std::max(0.0, g(engine));
  }
  std::sort(caps.begin(), caps.end());
  Pack pack;
  pack.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pack.push_back({i, caps[i], dist.nominal_voltage});
  return pack;
}

}  // namespace bess
