#include "bess/architectures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bess {

std::string to_string(ArchitectureKind k) {
  switch (k) {
    case ArchitectureKind::fpp: return "FPP";
    case ArchitectureKind::cppp: return "C-PPP";
    case ArchitectureKind::lshippp: return "LS-HiPPP";
  }
  return "?";
}

ArchitectureKind parse_kind(std::string_view text) {
  std::string key;
  for (char c : text)
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (key == "FPP") return ArchitectureKind::fpp;
  if (key == "CPPP") return ArchitectureKind::cppp;
  if (key == "LSHIPPP") return ArchitectureKind::lshippp;
  throw std::invalid_argument("unknown architecture kind '" + std::string(text) + "'");
}

void ArchitectureConfig::check() const {
  if (n_batteries < 2) throw std::invalid_argument("architecture: n_modules must be >= 2");
  if (kind == ArchitectureKind::lshippp && !(n_layer1 >= 1 && n_layer1 < n_batteries))
    throw std::invalid_argument("architecture: LS-HiPPP needs 1 <= n_layer1 < n_modules");
  if (!(hierarchical_ratio >= 0.0)) throw std::invalid_argument("architecture: lambda_h must be >= 0");
  if (!(normalized_rating > 0.0)) throw std::invalid_argument("architecture: rating_r must be > 0");
  if (!(converter_efficiency > 0.0 && converter_efficiency <= 1.0))
    throw std::invalid_argument("architecture: eta_c must be in (0, 1]");
  if (!(horizon > 0.0)) throw std::invalid_argument("architecture: horizon_h must be > 0");
}

double Layer1Design::aggregate_energy() const {
  double s = 0.0;
  for (double f : optimal_flows) s += std::fabs(f);
  return s;
}

FlowNetwork build_fpp(const Pack& batteries, double rating_r, double horizon) {
  if (!(rating_r >= 0.0)) throw std::invalid_argument("build_fpp: R must be >= 0");
  FlowNetwork net;
  net.batteries = batteries;
  net.horizon = horizon;
  net.topology = Topology::dedicated;
  const double cap = rating_r * total_capacity(batteries) / static_cast<double>(batteries.size());
  net.dedicated_caps.assign(batteries.size(), cap);
  return net;
}

FlowNetwork build_cppp(const Pack& batteries, double rating_r, double horizon) {
  if (!(rating_r >= 0.0)) throw std::invalid_argument("build_cppp: R must be >= 0");
  FlowNetwork net;
  net.batteries = batteries;
  net.horizon = horizon;
  const std::size_t n = batteries.size();
  const double cap = n > 1 ? rating_r * total_capacity(batteries) / static_cast<double>(n - 1) : 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) net.converter_edges.push_back({j, j + 1, cap, 2});
  return net;
}

namespace {

FlowNetwork assemble_lshippp(const Pack& batteries, const Layer1Design& layer1,
                             double layer1_scale, double layer2_cap, double horizon) {
  if (layer1.n_batteries != batteries.size())
    throw std::invalid_argument("build_lshippp: Layer 1 was designed for " +
                                std::to_string(layer1.n_batteries) + " batteries, pack has " +
                                std::to_string(batteries.size()));
  if (layer1.optimal_flows.size() != layer1.edges.size())
    throw std::invalid_argument("build_lshippp: Layer 1 flows do not match its edges");
  FlowNetwork net;
  net.batteries = batteries;
  net.horizon = horizon;
  for (std::size_t i = 0; i < layer1.edges.size(); ++i)
    net.converter_edges.push_back({layer1.edges[i].first, layer1.edges[i].second,
                                   layer1_scale * std::fabs(layer1.optimal_flows[i]), 1});
  for (std::size_t j = 0; j + 1 < batteries.size(); ++j)
    net.converter_edges.push_back({j, j + 1, layer2_cap, 2});
  return net;
}

}  // namespace

FlowNetwork build_lshippp(const Pack& batteries, const Layer1Design& layer1, double lambda_h,
                          double horizon, double layer1_scale) {
  if (!(lambda_h >= 0.0)) throw std::invalid_argument("build_lshippp: lambda_H must be >= 0");
  const double n_l2 = static_cast<double>(batteries.size() - 1);
  const double layer2_cap = lambda_h * layer1.aggregate_energy() / n_l2;
  return assemble_lshippp(batteries, layer1, layer1_scale, layer2_cap, horizon);
}

LsHipppBudget lshippp_budget(const Layer1Design& layer1, double rating_r,
                             double expected_intrinsic) {
  LsHipppBudget b;
  const double budget = rating_r * expected_intrinsic;
  const double l1 = layer1.aggregate_energy();
  const double n_l2 = static_cast<double>(layer1.n_batteries - 1);
  if (l1 <= 0.0) {
    // Nothing to do in Layer 1; the whole budget goes to Layer 2.
    b.lambda_h = budget > 0.0 ? kInf : 0.0;
    b.layer2_edge_energy = budget / n_l2;
  } else if (budget <= l1) {
    b.layer1_scale = budget / l1;
  } else {
    b.lambda_h = budget / l1 - 1.0;
    b.layer2_edge_energy = (budget - l1) / n_l2;
  }
  return b;
}

double lshippp_rating(const Layer1Design& layer1, double lambda_h, double expected_intrinsic) {
  return (1.0 + lambda_h) * layer1.aggregate_energy() / expected_intrinsic;
}

FlowNetwork build_lshippp_for_rating(const Pack& batteries, const Layer1Design& layer1,
                                     double rating_r, double expected_intrinsic, double horizon) {
  const LsHipppBudget b = lshippp_budget(layer1, rating_r, expected_intrinsic);
  return assemble_lshippp(batteries, layer1, b.layer1_scale, b.layer2_edge_energy, horizon);
}

std::vector<std::string> validate(const FlowNetwork& net) { return network_violations(net); }

double total_converter_energy(const FlowNetwork& net) {
  double s = std::accumulate(net.dedicated_caps.begin(), net.dedicated_caps.end(), 0.0);
  for (const auto& e : net.converter_edges) s += e.energy_cap;
  return s;
}

}  // namespace bess
