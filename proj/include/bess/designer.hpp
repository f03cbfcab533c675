#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bess/architectures.hpp"
#include "bess/supply.hpp"

namespace bess {

using Placement = std::vector<BatteryPair>;

/// All size-m sets of pairs (i, j), i < j, j - i <= max_span over n batteries,
/// lexicographic. Empty when m exceeds the number of admissible pairs.
std::vector<Placement> enumerate_placements(std::size_t n, std::size_t m, std::size_t max_span);

/// Exhaustive Layer 1 search on the expected set with uncapped converters.
/// Ties on delivered energy go to the smallest peak flow, then to the first
/// placement in lexicographic order.
Layer1Design design_layer1(const ExpectedSet& expected, std::size_t m, double horizon,
                           std::size_t max_span, std::size_t workers = 1);

struct UtilizationStats {
  double mean = 0.0;
  double stddev = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
  double idr() const { return p90 - p10; }
};

UtilizationStats summarize(const std::vector<double>& samples);

struct TradeoffPoint {
  ArchitectureKind kind = ArchitectureKind::lshippp;
  double total_normalized_rating = 0.0;  // R
  double lambda_h = 0.0;                 // LS-HiPPP only
  double layer2_rating = 0.0;            // kW per Layer 2 converter, LS-HiPPP only
  UtilizationStats utilization;
};

/// Packs k = 0..count-1 with seeds derived from (seed, k).
std::vector<Pack> sample_packs(const SupplyDistribution& dist, std::size_t n, std::size_t count,
                               std::uint64_t seed);

/// Order-sensitive hash of a pack list, used to audit common random numbers.
std::uint64_t pack_hash(const std::vector<Pack>& packs);

/// Monte Carlo sweep of lambda_H with Layer 1 held at its design flows.
std::vector<TradeoffPoint> design_layer2(const Layer1Design& layer1,
                                         const SupplyDistribution& dist,
                                         const std::vector<double>& lambda_grid,
                                         std::size_t n_samples, std::uint64_t seed,
                                         std::size_t workers = 1);

/// Same sweep over an explicit pack list.
std::vector<TradeoffPoint> design_layer2(const Layer1Design& layer1,
                                         const std::vector<Pack>& packs,
                                         double expected_intrinsic,
                                         const std::vector<double>& lambda_grid,
                                         std::size_t workers = 1);

/// Everything a tradeoff study needs to build any of the three kinds.
struct TradeoffContext {
  std::vector<Pack> packs;
  Layer1Design layer1;  // used by LS-HiPPP
  double expected_intrinsic = 0.0;
  double horizon = 1.0;
};

/// Utilization per pack for one kind at one R.
std::vector<double> utilization_samples(ArchitectureKind kind, const TradeoffContext& ctx,
                                        double rating_r, std::size_t workers = 1);

/// Effective (deliverable) energy per pack for one kind at one R, kWh.
std::vector<double> deliverable_samples(ArchitectureKind kind, const TradeoffContext& ctx,
                                        double rating_r, std::size_t workers = 1);

/// One point per R; the same packs serve every R.
std::vector<TradeoffPoint> tradeoff_curve(ArchitectureKind kind, const TradeoffContext& ctx,
                                          const std::vector<double>& rating_grid,
                                          std::size_t workers = 1);

/// Builds the network of the given kind for one pack at budget R.
FlowNetwork build_architecture(ArchitectureKind kind, const Pack& pack,
                               const TradeoffContext& ctx, double rating_r);

/// Default lambda_H grid: 0 plus 20 log-spaced points in [0.05, 5].
std::vector<double> default_lambda_grid();

/// n evenly spaced ratings from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

}  // namespace bess
