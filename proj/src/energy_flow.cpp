#include "bess/energy_flow.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <sstream>
#include <utility>

namespace bess {

std::vector<std::string> network_violations(const FlowNetwork& net) {
  std::vector<std::string> out;
  const std::size_t n = net.batteries.size();
  if (n < 2) out.push_back("network needs at least 2 batteries");
  if (!(net.horizon > 0.0)) out.push_back("horizon must be > 0");
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = net.batteries[j];
    if (!(b.capacity >= 0.0) || !std::isfinite(b.capacity))
      out.push_back("battery " + std::to_string(j) + " has invalid capacity");
    if (!(b.voltage > 0.0)) out.push_back("battery " + std::to_string(j) + " has voltage <= 0");
  }
  std::set<std::tuple<int, std::size_t, std::size_t>> seen;
  for (std::size_t k = 0; k < net.converter_edges.size(); ++k) {
    const auto& e = net.converter_edges[k];
    const std::string tag = "edge " + std::to_string(k);
    if (e.from_battery >= n || e.to_battery >= n) {
      out.push_back(tag + " references a battery out of range");
      continue;
    }
    if (e.from_battery == e.to_battery) out.push_back(tag + " is a self-loop");
    if (!(e.energy_cap >= 0.0)) out.push_back(tag + " has negative energy cap");
    if (e.layer != 1 && e.layer != 2) out.push_back(tag + " has layer other than 1 or 2");
    const auto key = std::make_tuple(e.layer, std::min(e.from_battery, e.to_battery),
                                     std::max(e.from_battery, e.to_battery));
    if (!seen.insert(key).second) out.push_back(tag + " duplicates an edge in the same layer");
  }
  if (net.topology == Topology::dedicated) {
    if (!net.converter_edges.empty())
      out.push_back("dedicated topology cannot carry battery-to-battery edges");
    if (net.dedicated_caps.size() != n)
      out.push_back("dedicated topology needs one converter cap per battery");
    for (double c : net.dedicated_caps)
      if (!(c >= 0.0)) out.push_back("dedicated converter cap must be >= 0");
  }
  return out;
}

namespace {

void require_valid(const FlowNetwork& net) {
  const auto v = network_violations(net);
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid flow network:";
  for (const auto& s : v) os << "\n  - " << s;
  throw std::invalid_argument(os.str());
}

FlowSolution dedicated_solution(const FlowNetwork& net) {
  FlowSolution s;
  const std::size_t n = net.batteries.size();
  s.string_output.resize(n);
  s.extraction.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double e = std::min(net.batteries[j].capacity, net.dedicated_caps[j]);
    s.string_output[j] = e;
    s.extraction[j] = e;
    s.total_output += e;
  }
  return s;
}

// Columns of the string program shared by all passes.
struct StringProgram {
  BoundedLp lp;
  std::size_t q = 0;
  std::vector<std::size_t> flow;
};

StringProgram string_program(const FlowNetwork& net, double output_weight) {
  StringProgram p;
  const std::size_t n = net.batteries.size();
  double vsum = 0.0;
  for (const auto& b : net.batteries) vsum += b.voltage;
  p.q = p.lp.add_variable(0.0, kInf, output_weight * vsum);
  for (const auto& e : net.converter_edges)
    p.flow.push_back(p.lp.add_variable(-e.energy_cap, e.energy_cap));
  std::vector<std::size_t> slack(n);
  for (std::size_t j = 0; j < n; ++j) slack[j] = p.lp.add_variable(0.0, kInf);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::pair<std::size_t, double>> terms{{p.q, net.batteries[j].voltage},
                                                      {slack[j], 1.0}};
    for (std::size_t k = 0; k < net.converter_edges.size(); ++k) {
      const auto& e = net.converter_edges[k];
      if (e.from_battery == j) terms.push_back({p.flow[k], 1.0});
      if (e.to_battery == j) terms.push_back({p.flow[k], -1.0});
    }
    p.lp.add_row(terms, net.batteries[j].capacity);
  }
  return p;
}

FlowSolution extract(const FlowNetwork& net, const StringProgram& p, const LpResult& r) {
  FlowSolution s;
  const std::size_t n = net.batteries.size();
  s.string_charge = r.x[p.q];
  s.edge_flows.resize(net.converter_edges.size());
  for (std::size_t k = 0; k < s.edge_flows.size(); ++k) s.edge_flows[k] = r.x[p.flow[k]];
  s.string_output.resize(n);
  s.extraction.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.string_output[j] = s.string_charge * net.batteries[j].voltage;
    s.extraction[j] = s.string_output[j];
    s.total_output += s.string_output[j];
  }
  for (std::size_t k = 0; k < s.edge_flows.size(); ++k) {
    const auto& e = net.converter_edges[k];
    s.extraction[e.from_battery] += s.edge_flows[k];
    s.extraction[e.to_battery] -= s.edge_flows[k];
  }
  return s;
}

LpResult solve_or_throw(const BoundedLp& lp, const SimplexOptions& options, const char* what) {
  LpResult r = solve_bounded_lp(lp, options);
  if (r.status != LpStatus::optimal)
    throw FlowError(std::string(what) + ": energy-flow program is " + to_string(r.status));
  return r;
}

}  // namespace

FlowSolution max_deliverable_energy(const FlowNetwork& net, const SimplexOptions& options) {
  require_valid(net);
  if (net.topology == Topology::dedicated) return dedicated_solution(net);
  StringProgram p = string_program(net, 1.0);
  return extract(net, p, solve_or_throw(p.lp, options, "max_deliverable_energy"));
}

FlowSolution min_peak_flow(const FlowNetwork& net, double required_output,
                           const SimplexOptions& options) {
  require_valid(net);
  if (net.topology == Topology::dedicated)
    throw std::invalid_argument("min_peak_flow: dedicated topology has no string flows");
  if (required_output < 0.0) throw std::invalid_argument("min_peak_flow: required_output < 0");

  const double best = max_deliverable_energy(net, options).total_output;
  const double slack_tol = 1e-9 * std::max(1.0, best);
  if (required_output > best + slack_tol)
    throw FlowError("min_peak_flow: required output exceeds the maximum deliverable energy");
  const double target = std::min(required_output, best);
  double vsum = 0.0;
  for (const auto& b : net.batteries) vsum += b.voltage;

  // Pass 1: minimize the epigraph variable over |f_e|.
  StringProgram p1 = string_program(net, 0.0);
  p1.lp.add_row({{p1.q, vsum}}, target);
  const std::size_t peak = p1.lp.add_variable(0.0, kInf, -1.0);
  for (std::size_t k = 0; k < p1.flow.size(); ++k) {
    const std::size_t up = p1.lp.add_variable(0.0, kInf);
    const std::size_t dn = p1.lp.add_variable(0.0, kInf);
    p1.lp.add_row({{p1.flow[k], 1.0}, {peak, -1.0}, {up, 1.0}}, 0.0);
    p1.lp.add_row({{p1.flow[k], -1.0}, {peak, -1.0}, {dn, 1.0}}, 0.0);
  }
  const LpResult r1 = solve_or_throw(p1.lp, options, "min_peak_flow");
  const double peak_value = r1.x[peak];
  if (p1.flow.empty()) return extract(net, p1, r1);

  // Pass 2: hold the peak, minimize total |f_e|.
  const double cap = peak_value + 1e-9 * std::max(1.0, peak_value);
  StringProgram p2 = string_program(net, 0.0);
  p2.lp.add_row({{p2.q, vsum}}, target);
  for (std::size_t k = 0; k < p2.flow.size(); ++k) {
    const std::size_t mag = p2.lp.add_variable(0.0, cap, -1.0);
    const std::size_t up = p2.lp.add_variable(0.0, kInf);
    const std::size_t dn = p2.lp.add_variable(0.0, kInf);
    p2.lp.add_row({{p2.flow[k], 1.0}, {mag, -1.0}, {up, 1.0}}, 0.0);
    p2.lp.add_row({{p2.flow[k], -1.0}, {mag, -1.0}, {dn, 1.0}}, 0.0);
  }
  return extract(net, p2, solve_or_throw(p2.lp, options, "min_peak_flow"));
}

double fpp_deliverable(const Pack& batteries, double per_converter_energy_cap) {
  if (per_converter_energy_cap < 0.0)
    throw std::invalid_argument("fpp_deliverable: converter cap must be >= 0");
  double total = 0.0;
  for (const auto& b : batteries) total += std::min(b.capacity, per_converter_energy_cap);
  return total;
}

double peak_abs_flow(const FlowSolution& s) {
  double m = 0.0;
  for (double f : s.edge_flows) m = std::max(m, std::fabs(f));
  return m;
}

double utilization(const FlowNetwork& net, const FlowSolution& s) {
  const double total = total_capacity(net.batteries);
  if (!(total > 0.0)) throw std::domain_error("utilization: intrinsic capacity is zero");
  return s.total_output / total;
}

}  // namespace bess
