#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bess/lp.hpp"
#include "bess/supply.hpp"

namespace bess {

/// Bidirectional lossless converter between two batteries of the string.
/// Positive flow moves energy from `from_battery` to `to_battery`.
struct ConverterEdge {
  std::size_t from_battery = 0;
  std::size_t to_battery = 0;
  double energy_cap = 0.0;  // kWh over the horizon; kInf while designing
  int layer = 1;
};

enum class Topology {
  series_string,  // batteries in series, converters shuffle energy between them
  dedicated,      // one converter per battery straight to the bus, no string path
};

struct FlowNetwork {
  Pack batteries;
  std::vector<ConverterEdge> converter_edges;
  double horizon = 1.0;  // h
  Topology topology = Topology::series_string;
  std::vector<double> dedicated_caps;  // kWh per battery, dedicated topology only
};

struct FlowSolution {
  double string_charge = 0.0;          // Q_string, kWh per volt
  std::vector<double> string_output;   // e_out per battery, kWh
  std::vector<double> edge_flows;      // signed, kWh, aligned with converter_edges
  std::vector<double> extraction;      // e_b per battery, kWh
  double total_output = 0.0;           // kWh
};

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every violated FlowNetwork invariant, human readable. Empty when valid.
std::vector<std::string> network_violations(const FlowNetwork& net);

/// Maximum energy the string can deliver before any one battery is depleted.
FlowSolution max_deliverable_energy(const FlowNetwork& net,
                                    const SimplexOptions& options = {});

/// Among flows delivering exactly `required_output`, the one with the
/// smallest peak |flow|, then the smallest total |flow|.
FlowSolution min_peak_flow(const FlowNetwork& net, double required_output,
                           const SimplexOptions& options = {});

/// Full power processing: each battery behind its own converter.
double fpp_deliverable(const Pack& batteries, double per_converter_energy_cap);

double peak_abs_flow(const FlowSolution& s);

/// Utilization of a solution against the network's intrinsic capacity.
double utilization(const FlowNetwork& net, const FlowSolution& s);

}  // namespace bess
