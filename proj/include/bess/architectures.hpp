#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bess/energy_flow.hpp"

namespace bess {

enum class ArchitectureKind { fpp, cppp, lshippp };

std::string to_string(ArchitectureKind k);
/// Accepts "FPP", "CPPP", "C-PPP", "LSHIPPP", "LS-HiPPP" (case-insensitive).
ArchitectureKind parse_kind(std::string_view text);

struct ArchitectureConfig {
  ArchitectureKind kind = ArchitectureKind::lshippp;
  std::size_t n_batteries = 9;
  std::size_t n_layer1 = 3;
  double hierarchical_ratio = 0.0;  // lambda_H, LS-HiPPP only
  double normalized_rating = 0.2;   // R
  double converter_efficiency = 0.85;
  double horizon = 2.25;  // h

  void check() const;
};

using BatteryPair = std::pair<std::size_t, std::size_t>;

/// Sparse Layer 1 interconnection chosen on the expected set.
struct Layer1Design {
  std::size_t n_batteries = 0;
  std::vector<BatteryPair> edges;      // i < j, zero-based
  std::vector<double> optimal_flows;   // signed e1* per converter, kWh
  double rating = 0.0;                 // kW, identical for every Layer 1 converter
  double expected_output = 0.0;        // kWh
  double horizon = 1.0;                // h

  /// Sum of |e1*| over the Layer 1 converters, kWh.
  double aggregate_energy() const;
};

FlowNetwork build_fpp(const Pack& batteries, double rating_r, double horizon);
FlowNetwork build_cppp(const Pack& batteries, double rating_r, double horizon);

/// Layer 1 caps |e1*_i| (scaled by `layer1_scale`), Layer 2 adjacent caps
/// lambda_H * sum|e1*| / (N - 1).
FlowNetwork build_lshippp(const Pack& batteries, const Layer1Design& layer1, double lambda_h,
                          double horizon, double layer1_scale = 1.0);

/// How a total normalized budget R is split for LS-HiPPP.
struct LsHipppBudget {
  double lambda_h = 0.0;
  double layer1_scale = 1.0;
  double layer2_edge_energy = 0.0;  // kWh per Layer 2 converter
};

/// R counts both layers against the expected intrinsic capacity. Below the
/// Layer 1 design point the Layer 1 caps shrink uniformly and lambda_H = 0.
LsHipppBudget lshippp_budget(const Layer1Design& layer1, double rating_r,
                             double expected_intrinsic);

/// R realized by a given lambda_H.
double lshippp_rating(const Layer1Design& layer1, double lambda_h, double expected_intrinsic);

FlowNetwork build_lshippp_for_rating(const Pack& batteries, const Layer1Design& layer1,
                                     double rating_r, double expected_intrinsic, double horizon);

/// All FlowNetwork invariant violations; empty means ok.
std::vector<std::string> validate(const FlowNetwork& net);

/// Sum of converter energy caps (edges plus dedicated converters), kWh.
double total_converter_energy(const FlowNetwork& net);

}  // namespace bess
