#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bess/energy_flow.hpp"
#include "oracle.hpp"

using namespace bess;

namespace {

Pack pack_of(std::initializer_list<double> caps) {
  Pack p;
  for (double c : caps) p.push_back({p.size(), c, 50.0});
  return p;
}

FlowNetwork chain(const Pack& p, double cap) {
  FlowNetwork net;
  net.batteries = p;
  for (std::size_t j = 0; j + 1 < p.size(); ++j) net.converter_edges.push_back({j, j + 1, cap, 2});
  return net;
}

}  // namespace

TEST_CASE("string without converters") {
  FlowNetwork net;
  net.batteries = pack_of({4, 4, 4});
  const auto s = max_deliverable_energy(net);
  CHECK(s.total_output == doctest::Approx(12.0));
  CHECK(utilization(net, s) == doctest::Approx(1.0));

  net.batteries = pack_of({3, 4, 5});
  CHECK(max_deliverable_energy(net).total_output == doctest::Approx(9.0));
}

TEST_CASE("adjacent converters ship energy down the string") {
  const auto net = chain(pack_of({3, 4, 5}), 1.0);
  const auto s = max_deliverable_energy(net);
  CHECK(s.total_output == doctest::Approx(12.0));
  CHECK(oracle::max_output(net) == doctest::Approx(12.0));

  const auto half = chain(pack_of({3, 4, 5}), 0.5);
  const auto h = max_deliverable_energy(half);
  CHECK(h.total_output == doctest::Approx(10.5));
  CHECK(utilization(half, h) == doctest::Approx(0.875));
  CHECK(oracle::max_output(half) == doctest::Approx(10.5));
}

TEST_CASE("solution bookkeeping") {
  const auto net = chain(pack_of({3, 4, 5}), 0.5);
  const auto s = max_deliverable_energy(net);
  REQUIRE(s.extraction.size() == 3);
  REQUIRE(s.edge_flows.size() == 2);
  double total = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    double net_out = s.string_output[j];
    for (std::size_t e = 0; e < 2; ++e) {
      if (net.converter_edges[e].from_battery == j) net_out += s.edge_flows[e];
      if (net.converter_edges[e].to_battery == j) net_out -= s.edge_flows[e];
    }
    CHECK(s.extraction[j] == doctest::Approx(net_out));
    CHECK(s.extraction[j] <= net.batteries[j].capacity + 1e-9);
    total += s.extraction[j];
  }
  CHECK(std::fabs(total - s.total_output) <= 1e-9);
  for (double f : s.edge_flows) CHECK(std::fabs(f) <= 0.5 + 1e-9);
}

TEST_CASE("minimum peak flow") {
  auto net = chain(pack_of({3, 4, 5}), kInf);
  const auto s = min_peak_flow(net, 12.0);
  CHECK(s.total_output == doctest::Approx(12.0));
  CHECK(peak_abs_flow(s) == doctest::Approx(1.0));
  CHECK(s.edge_flows[0] == doctest::Approx(-1.0));
  CHECK(s.edge_flows[1] == doctest::Approx(-1.0));

  const auto zero = min_peak_flow(net, 0.0);
  CHECK(zero.total_output == doctest::Approx(0.0));
  for (double f : zero.edge_flows) CHECK(f == doctest::Approx(0.0));

  auto flat = chain(pack_of({5, 5, 5, 5}), kInf);
  const auto f = min_peak_flow(flat, 20.0);
  for (double x : f.edge_flows) CHECK(std::fabs(x) <= 1e-9);

  CHECK_THROWS_AS(min_peak_flow(chain(pack_of({3, 4, 5}), 0.5), 11.0), FlowError);
}

TEST_CASE("full power processing") {
  CHECK(fpp_deliverable(pack_of({3, 4, 5}), 5.0) == doctest::Approx(12.0));
  CHECK(fpp_deliverable(pack_of({3, 4, 5}), 0.8) == doctest::Approx(2.4));
  SupplyDistribution d;
  const auto e = flatten_distribution(d, 9);
  const double cap = 0.2 * 337.5 / 9.0;
  CHECK(fpp_deliverable(e.batteries, cap) == doctest::Approx(67.5));

  FlowNetwork net;
  net.batteries = pack_of({3, 4, 5});
  net.topology = Topology::dedicated;
  net.dedicated_caps = {0.8, 0.8, 0.8};
  CHECK(max_deliverable_energy(net).total_output == doctest::Approx(2.4));
}

TEST_CASE("unequal voltages") {
  FlowNetwork net;
  net.batteries = {{0, 10.0, 40.0}, {1, 10.0, 60.0}};
  // Without converters the 60 V module limits the string charge to 1/6.
  CHECK(max_deliverable_energy(net).total_output == doctest::Approx(100.0 / 6.0));
  net.converter_edges.push_back({0, 1, 100.0, 1});
  CHECK(max_deliverable_energy(net).total_output == doctest::Approx(20.0));
}

TEST_CASE("network validation") {
  auto net = chain(pack_of({3, 4, 5}), 1.0);
  CHECK(network_violations(net).empty());
  net.converter_edges.push_back({1, 0, 1.0, 2});
  CHECK_FALSE(network_violations(net).empty());
  net = chain(pack_of({3, 4, 5}), 1.0);
  net.converter_edges.push_back({2, 2, 1.0, 1});
  net.converter_edges.push_back({0, 7, 1.0, 1});
  net.converter_edges.push_back({0, 2, -1.0, 1});
  CHECK(network_violations(net).size() == 3);
  CHECK_THROWS_AS(max_deliverable_energy(net), std::invalid_argument);
  FlowNetwork one;
  one.batteries = pack_of({3});
  CHECK_FALSE(network_violations(one).empty());
}

TEST_CASE("random small networks agree with the oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 3;
    const auto net = oracle::random_network(rng, n, rng() % 4, t % 2 == 0);
    const double ref = oracle::max_output(net);
    CHECK(max_deliverable_energy(net).total_output ==
          doctest::Approx(ref).epsilon(1e-8).scale(1.0));
  }
}
