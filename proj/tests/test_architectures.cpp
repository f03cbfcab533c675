#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bess/architectures.hpp"
#include "bess/designer.hpp"
#include "bess/metrics.hpp"

using namespace bess;

namespace {

Pack pack_of(std::initializer_list<double> caps) {
  Pack p;
  for (double c : caps) p.push_back({p.size(), c, 50.0});
  return p;
}

Layer1Design paper_layer1() {
  const auto e = flatten_distribution(SupplyDistribution{}, 9);
  return design_layer1(e, 3, 2.25, 8);
}

}  // namespace

TEST_CASE("kind names round trip") {
  for (auto k : {ArchitectureKind::fpp, ArchitectureKind::cppp, ArchitectureKind::lshippp})
    CHECK(parse_kind(to_string(k)) == k);
  CHECK(parse_kind("cppp") == ArchitectureKind::cppp);
  CHECK(parse_kind("ls_hippp") == ArchitectureKind::lshippp);
  CHECK_THROWS_AS(parse_kind("dpp"), std::invalid_argument);
}

TEST_CASE("FPP") {
  const auto homog = pack_of({5, 5, 5, 5});
  const auto net = build_fpp(homog, 1.0, 1.0);
  CHECK(utilization(net, max_deliverable_energy(net)) == doctest::Approx(1.0));
  const auto e = flatten_distribution(SupplyDistribution{}, 9);
  const auto f = build_fpp(e.batteries, 0.2, 2.25);
  CHECK(utilization(f, max_deliverable_energy(f)) == doctest::Approx(0.2));
  CHECK(total_converter_energy(f) == doctest::Approx(0.2 * 337.5));
  CHECK(validate(f).empty());
}

TEST_CASE("C-PPP") {
  const auto p = pack_of({3, 4, 5});
  const auto net = build_cppp(p, 1.0 / 6.0, 1.0);  // cap = R * 12 / 2 = 1 kWh
  REQUIRE(net.converter_edges.size() == 2);
  CHECK(net.converter_edges[0].energy_cap == doctest::Approx(1.0));
  CHECK(utilization(net, max_deliverable_energy(net)) == doctest::Approx(1.0));
  const auto zero = build_cppp(p, 0.0, 1.0);
  CHECK(utilization(zero, max_deliverable_energy(zero)) == doctest::Approx(0.75));
  CHECK(total_converter_energy(build_cppp(p, 0.3, 1.0)) == doctest::Approx(0.3 * 12.0));
  CHECK(validate(net).empty());
}

TEST_CASE("LS-HiPPP construction") {
  const auto l1 = paper_layer1();
  const auto pack = sample_pack(SupplyDistribution{}, 9, 1);

  const auto none = build_lshippp(pack, l1, 0.0, 2.25);
  REQUIRE(none.converter_edges.size() == 3 + 8);
  for (std::size_t e = 0; e < 3; ++e) {
    CHECK(none.converter_edges[e].layer == 1);
    CHECK(none.converter_edges[e].energy_cap == doctest::Approx(std::fabs(l1.optimal_flows[e])));
  }
  for (std::size_t e = 3; e < 11; ++e) {
    CHECK(none.converter_edges[e].layer == 2);
    CHECK(none.converter_edges[e].energy_cap == 0.0);
  }
  CHECK(validate(none).empty());

  const auto big = build_lshippp(pack, l1, 1000.0, 2.25);
  CHECK(utilization(big, max_deliverable_energy(big)) == doctest::Approx(1.0));

  const double lambda = 1.5;
  const auto mid = build_lshippp(pack, l1, lambda, 2.25);
  CHECK(total_converter_energy(mid) == doctest::Approx((1.0 + lambda) * l1.aggregate_energy()));

  CHECK_THROWS_AS(build_lshippp(pack_of({3, 4, 5}), l1, 0.0, 2.25), std::invalid_argument);
}

TEST_CASE("LS-HiPPP budget split") {
  const auto l1 = paper_layer1();
  const double ei = 337.5;
  const double r1 = l1.aggregate_energy() / ei;

  const auto below = lshippp_budget(l1, 0.5 * r1, ei);
  CHECK(below.lambda_h == 0.0);
  CHECK(below.layer1_scale == doctest::Approx(0.5));
  CHECK(below.layer2_edge_energy == 0.0);

  const auto above = lshippp_budget(l1, 0.2, ei);
  CHECK(above.layer1_scale == 1.0);
  CHECK(lshippp_rating(l1, above.lambda_h, ei) == doctest::Approx(0.2));
  const auto pack = sample_pack(SupplyDistribution{}, 9, 2);
  CHECK(total_converter_energy(build_lshippp_for_rating(pack, l1, 0.2, ei, 2.25)) ==
        doctest::Approx(0.2 * ei));
  CHECK(total_converter_energy(build_lshippp_for_rating(pack, l1, 0.5 * r1, ei, 2.25)) ==
        doctest::Approx(0.5 * r1 * ei));
}

TEST_CASE("homogeneous Layer 1 puts the whole budget in Layer 2") {
  SupplyDistribution d;
  d.std_capacity = 0.0;
  const auto l1 = design_layer1(flatten_distribution(d, 5), 2, 1.0, 4);
  CHECK(l1.aggregate_energy() == 0.0);
  const auto b = lshippp_budget(l1, 0.4, 187.5);
  CHECK(b.layer2_edge_energy == doctest::Approx(0.4 * 187.5 / 4.0));
}

TEST_CASE("configuration invariants") {
  ArchitectureConfig c;
  CHECK_NOTHROW(c.check());
  c.n_layer1 = 9;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
  c = ArchitectureConfig{};
  c.converter_efficiency = 0.0;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
  c = ArchitectureConfig{};
  c.normalized_rating = 0.0;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
}
