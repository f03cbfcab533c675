#include "bess/designer.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>
#include <stdexcept>

#include "bess/metrics.hpp"
#include "bess/parallel.hpp"
#include "bess/seeding.hpp"

namespace bess {

std::vector<Placement> enumerate_placements(std::size_t n, std::size_t m, std::size_t max_span) {
  if (n < 2) throw std::invalid_argument("enumerate_placements: n must be >= 2");
  if (m < 1) throw std::invalid_argument("enumerate_placements: m must be >= 1");
  if (max_span < 1 || max_span > n - 1)
    throw std::invalid_argument("enumerate_placements: max_span must be in [1, n - 1]");

  std::vector<BatteryPair> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n && j - i <= max_span; ++j) pairs.push_back({i, j});

  std::vector<Placement> out;
  if (m > pairs.size()) return out;
  std::vector<std::size_t> idx(m);
  for (std::size_t k = 0; k < m; ++k) idx[k] = k;
  const std::size_t p = pairs.size();
  for (;;) {
    Placement pl;
    pl.reserve(m);
    for (std::size_t k : idx) pl.push_back(pairs[k]);
    out.push_back(std::move(pl));
    // Advance the rightmost index that still has room.
    std::size_t k = m;
    while (k > 0 && idx[k - 1] == p - m + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t r = k; r < m; ++r) idx[r] = idx[r - 1] + 1;
  }
  return out;
}

namespace {

FlowNetwork design_network(const ExpectedSet& expected, const Placement& placement, double horizon) {
  FlowNetwork net;
  net.batteries = expected.batteries;
  net.horizon = horizon;
  for (const auto& [i, j] : placement) net.converter_edges.push_back({i, j, kInf, 1});
  return net;
}

}  // namespace

Layer1Design design_layer1(const ExpectedSet& expected, std::size_t m, double horizon,
                           std::size_t max_span, std::size_t workers) {
  const std::size_t n = expected.batteries.size();
  if (m >= n) throw std::invalid_argument("design_layer1: need m < N");
  if (!(horizon > 0.0)) throw std::invalid_argument("design_layer1: horizon must be > 0");
  const auto placements = enumerate_placements(n, m, max_span);
  if (placements.empty())
    throw std::invalid_argument("design_layer1: no admissible placement for this span");

  std::vector<double> output(placements.size());
  parallel_for(placements.size(), workers, [&](std::size_t k) {
    output[k] = max_deliverable_energy(design_network(expected, placements[k], horizon)).total_output;
  });
  const double best = *std::max_element(output.begin(), output.end());
  const double tol = 1e-9 * std::max(1.0, best);

  std::vector<std::size_t> tied;
  for (std::size_t k = 0; k < placements.size(); ++k)
    if (output[k] >= best - tol) tied.push_back(k);

  std::vector<FlowSolution> refined(tied.size());
  parallel_for(tied.size(), workers, [&](std::size_t t) {
    refined[t] = min_peak_flow(design_network(expected, placements[tied[t]], horizon), best);
  });

  std::size_t pick = 0;
  double pick_peak = peak_abs_flow(refined[0]);
  for (std::size_t t = 1; t < tied.size(); ++t) {
    const double pk = peak_abs_flow(refined[t]);
    if (pk < pick_peak - 1e-9 * std::max(1.0, pick_peak)) {
      pick = t;
      pick_peak = pk;
    }
  }

  Layer1Design d;
  d.n_batteries = n;
  d.edges = placements[tied[pick]];
  d.optimal_flows = refined[pick].edge_flows;
  for (double& f : d.optimal_flows)
    if (std::fabs(f) < 1e-12) f = 0.0;
  d.rating = pick_peak / horizon;
  d.expected_output = refined[pick].total_output;
  d.horizon = horizon;
  return d;
}

UtilizationStats summarize(const std::vector<double>& samples) {
  UtilizationStats s;
  if (samples.empty()) return s;
  s.mean = mean(samples);
  s.stddev = stddev(samples);
  s.p10 = quantile(samples, 0.1);
  s.p90 = quantile(samples, 0.9);
  return s;
}

std::vector<Pack> sample_packs(const SupplyDistribution& dist, std::size_t n, std::size_t count,
                               std::uint64_t seed) {
  std::vector<Pack> packs;
  packs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) packs.push_back(sample_pack(dist, n, derive_seed(seed, {k})));
  return packs;
}

std::uint64_t pack_hash(const std::vector<Pack>& packs) {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (const auto& p : packs)
    for (const auto& b : p) {
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(b.capacity));
      std::memcpy(&bits, &b.capacity, sizeof(bits));
      h = mix64(h ^ bits);
    }
  return h;
}

std::vector<TradeoffPoint> design_layer2(const Layer1Design& layer1,
                                         const std::vector<Pack>& packs,
                                         double expected_intrinsic,
                                         const std::vector<double>& lambda_grid,
                                         std::size_t workers) {
  if (lambda_grid.empty()) throw std::invalid_argument("design_layer2: empty lambda grid");
  if (packs.empty()) throw std::invalid_argument("design_layer2: need at least one sample");
  const double n_l2 = static_cast<double>(layer1.n_batteries - 1);
  std::vector<TradeoffPoint> out;
  for (double lambda : lambda_grid) {
    std::vector<double> u(packs.size());
    parallel_for(packs.size(), workers, [&](std::size_t k) {
      const FlowNetwork net = build_lshippp(packs[k], layer1, lambda, layer1.horizon);
      u[k] = utilization(net, max_deliverable_energy(net));
    });
    TradeoffPoint pt;
    pt.kind = ArchitectureKind::lshippp;
    pt.lambda_h = lambda;
    pt.total_normalized_rating = lshippp_rating(layer1, lambda, expected_intrinsic);
    pt.layer2_rating = lambda * layer1.aggregate_energy() / n_l2 / layer1.horizon;
    pt.utilization = summarize(u);
    out.push_back(pt);
  }
  return out;
}

std::vector<TradeoffPoint> design_layer2(const Layer1Design& layer1,
                                         const SupplyDistribution& dist,
                                         const std::vector<double>& lambda_grid,
                                         std::size_t n_samples, std::uint64_t seed,
                                         std::size_t workers) {
  if (n_samples < 1) throw std::invalid_argument("design_layer2: n_samples must be >= 1");
  const auto packs = sample_packs(dist, layer1.n_batteries, n_samples, seed);
  const double expected = flatten_distribution(dist, layer1.n_batteries).total_capacity();
  return design_layer2(layer1, packs, expected, lambda_grid, workers);
}

FlowNetwork build_architecture(ArchitectureKind kind, const Pack& pack,
                               const TradeoffContext& ctx, double rating_r) {
  switch (kind) {
    case ArchitectureKind::fpp: return build_fpp(pack, rating_r, ctx.horizon);
    case ArchitectureKind::cppp: return build_cppp(pack, rating_r, ctx.horizon);
    case ArchitectureKind::lshippp:
      return build_lshippp_for_rating(pack, ctx.layer1, rating_r, ctx.expected_intrinsic,
                                      ctx.horizon);
  }
  throw std::logic_error("build_architecture: unknown kind");
}

std::vector<double> deliverable_samples(ArchitectureKind kind, const TradeoffContext& ctx,
                                        double rating_r, std::size_t workers) {
  std::vector<double> out(ctx.packs.size());
  parallel_for(ctx.packs.size(), workers, [&](std::size_t k) {
    out[k] = max_deliverable_energy(build_architecture(kind, ctx.packs[k], ctx, rating_r)).total_output;
  });
  return out;
}

std::vector<double> utilization_samples(ArchitectureKind kind, const TradeoffContext& ctx,
                                        double rating_r, std::size_t workers) {
  std::vector<double> out = deliverable_samples(kind, ctx, rating_r, workers);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = energy_utilization(out[k], ctx.packs[k]);
  return out;
}

std::vector<TradeoffPoint> tradeoff_curve(ArchitectureKind kind, const TradeoffContext& ctx,
                                          const std::vector<double>& rating_grid,
                                          std::size_t workers) {
  std::vector<TradeoffPoint> out;
  for (double r : rating_grid) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("tradeoff_curve: R must be in (0, 1]");
    TradeoffPoint pt;
    pt.kind = kind;
    pt.total_normalized_rating = r;
    if (kind == ArchitectureKind::lshippp) {
      const LsHipppBudget b = lshippp_budget(ctx.layer1, r, ctx.expected_intrinsic);
      pt.lambda_h = b.lambda_h;
      pt.layer2_rating = b.layer2_edge_energy / ctx.horizon;
    }
    pt.utilization = summarize(utilization_samples(kind, ctx, r, workers));
    out.push_back(pt);
  }
  return out;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g{0.0};
  const double lo = std::log(0.05), hi = std::log(5.0);
  for (int i = 0; i < 20; ++i) g.push_back(std::exp(lo + (hi - lo) * i / 19.0));
  return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g;
  if (n == 1) return {lo};
  for (std::size_t i = 0; i < n; ++i)
    g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return g;
}

}  // namespace bess
