#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bess/plaza.hpp"
#include "bess/study.hpp"

using namespace bess;

namespace {

// With one arrival per day on average over a 1 h window, the first draw
// usually lands inside the window and later ones outside.
DayTrajectory one_cycle(double cap, double demand, double grid_kw) {
  BessMonolith b{cap, 150.0, cap};
  GridProfile g({{0.0, grid_kw}}, 24.0);
  for (std::uint64_t seed = 0;; ++seed) {
    auto t = simulate_day(b, g, ArrivalModel{1.0}, DemandModel{demand, 0.0, 2.0 * demand}, 150.0,
                          24.0, seed);
    if (!t.cycles.empty()) return t;
  }
}

}  // namespace

TEST_CASE("single-phase cycle") {
  const auto t = one_cycle(200.0, 30.0, 50.0);
  const auto& c = t.cycles.front();
  CHECK(c.full_power_h == doctest::Approx(0.2));
  CHECK(c.bess_delivered_kwh == doctest::Approx(20.0));
  CHECK(c.curtailed_h == 0.0);
  CHECK(c.recharge_h == doctest::Approx(0.4));
  CHECK(c.unmet_kwh == 0.0);
}

TEST_CASE("BESS depletion leads to a curtailed pedestal") {
  const auto t = one_cycle(10.0, 30.0, 50.0);
  const auto& c = t.cycles.front();
  CHECK(c.full_power_h == doctest::Approx(0.1));
  CHECK(c.full_power_kw * c.full_power_h == doctest::Approx(15.0));
  CHECK(c.bess_delivered_kwh == doctest::Approx(10.0));
  CHECK(c.curtailed_h == doctest::Approx(0.3));
  CHECK(c.recharge_h == doctest::Approx(0.2));
  DayTrajectory one;
  one.cycles = {c};
  const auto s = curtailed_minutes_per_ev(one);
  CHECK_FALSE(s.empty);
  CHECK(s.mean_minutes == doctest::Approx(18.0));
  CHECK(s.max_minutes == doctest::Approx(18.0));
}

TEST_CASE("grid above the charger rating idles the BESS") {
  const auto t = one_cycle(50.0, 30.0, 200.0);
  const auto& c = t.cycles.front();
  CHECK(c.bess_power_kw == 0.0);
  CHECK(c.full_power_kw == 150.0);
  CHECK(c.full_power_h == doctest::Approx(0.2));
  CHECK(c.bess_delivered_kwh == 0.0);
  CHECK(c.recharge_h == 0.0);
}

TEST_CASE("zero grid power ends the cycle with unmet demand") {
  const auto t = one_cycle(10.0, 30.0, 0.0);
  const auto& c = t.cycles.front();
  CHECK(c.unmet_kwh == doctest::Approx(30.0 - 150.0 * c.full_power_h));
  CHECK(c.unmet_kwh > 0.0);
  CHECK(c.curtailed_h == 0.0);
  CHECK(std::isinf(c.recharge_h));
  CHECK(t.cycles.size() == 1);
  CHECK(c.truncated);
}

TEST_CASE("no depletion means no curtailment") {
  BessMonolith b{1000.0, 150.0, 1000.0};
  const auto t = simulate_day(b, GridProfile::default_profile(), ArrivalModel{2.0},
                              DemandModel{30.0, 5.0, 60.0}, 150.0, 24.0, 4);
  REQUIRE_FALSE(t.cycles.empty());
  CHECK(curtailed_minutes_per_ev(t).mean_minutes == 0.0);
  CHECK(curtailed_minutes_per_ev(DayTrajectory{}).empty);
}

TEST_CASE("rare arrivals give at most a cycle or two") {
  BessMonolith b{30.0, 150.0, 30.0};
  std::size_t most = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto t = simulate_day(b, GridProfile::default_profile(), ArrivalModel{1e-4},
                                DemandModel{50.0, 10.0, 100.0}, 150.0, 24.0, s);
    most = std::max(most, t.cycles.size());
  }
  CHECK(most <= 1);
}

TEST_CASE("identical seeds give identical days") {
  BessMonolith b{30.0, 150.0, 30.0};
  const auto g = GridProfile::default_profile();
  const DemandModel d{50.0, 25.0, 100.0};
  const auto a = simulate_day(b, g, ArrivalModel{0.7}, d, 150.0, 24.0, 99);
  const auto c = simulate_day(b, g, ArrivalModel{0.7}, d, 150.0, 24.0, 99);
  CHECK(a.cycles_json() == c.cycles_json());
  CHECK(a.series_csv() == c.series_csv());
  const auto audit = audit_day(a, 150.0);
  CHECK(audit.balance_ok);
  CHECK(audit.full_at_start);
  CHECK(audit.no_overlap);
}

TEST_CASE("zero-demand day is flat") {
  BessMonolith b{30.0, 150.0, 30.0};
  GridProfile g({{0.0, 40.0}}, 24.0);
  const auto t = simulate_day(b, g, ArrivalModel{2.0}, DemandModel{1e-9, 0.0, 1e-9}, 150.0, 24.0, 1);
  for (const auto& s : t.series(0.25)) {
    CHECK(s.e_bess == doctest::Approx(30.0));
    CHECK(s.p_ev <= 150.0);
    CHECK(s.p_grid == 40.0);
  }
}

TEST_CASE("series output") {
  const auto t = one_cycle(10.0, 30.0, 50.0);
  const auto csv = t.series_csv();
  CHECK(csv.rfind("t,p_grid,p_bess,e_bess,p_ev\n", 0) == 0);
  const auto rows = t.series(1.0 / 60.0);
  CHECK(rows.size() == 24 * 60 + 1);
  for (const auto& s : rows) {
    CHECK(s.e_bess >= 0.0);
    CHECK(s.e_bess <= 10.0 + 1e-9);
  }
}

TEST_CASE("grid profile parsing") {
  std::istringstream ok("time_h,power_kw\n0,60\n6,45\n10,30\r\n");
  const auto g = GridProfile::from_csv(ok);
  CHECK(g.breakpoints().size() == 3);
  CHECK(g.power_at(0.0) == 60.0);
  CHECK(g.power_at(5.99) == 60.0);
  CHECK(g.power_at(6.0) == 45.0);
  CHECK(g.power_at(23.0) == 30.0);
  CHECK(g.min_power() == 30.0);
  CHECK(g.time_to_supply(5.0, 60.0 + 45.0) == doctest::Approx(2.0));

  std::istringstream round(g.to_csv());
  CHECK(GridProfile::from_csv(round).breakpoints() == g.breakpoints());

  std::istringstream bad_header("t,p\n0,1\n");
  CHECK_THROWS_AS(GridProfile::from_csv(bad_header), std::invalid_argument);
  std::istringstream not_zero("time_h,power_kw\n1,60\n");
  CHECK_THROWS_AS(GridProfile::from_csv(not_zero), std::invalid_argument);
  std::istringstream unordered("time_h,power_kw\n0,60\n5,1\n3,2\n");
  CHECK_THROWS_AS(GridProfile::from_csv(unordered), std::invalid_argument);
  std::istringstream negative("time_h,power_kw\n0,-1\n");
  CHECK_THROWS_AS(GridProfile::from_csv(negative), std::invalid_argument);
  std::istringstream junk("time_h,power_kw\n0,abc\n");
  CHECK_THROWS_AS(GridProfile::from_csv(junk), std::invalid_argument);
}

TEST_CASE("time to supply across a zero segment") {
  GridProfile g({{0.0, 10.0}, {1.0, 0.0}, {2.0, 20.0}}, 24.0);
  CHECK(g.time_to_supply(0.5, 5.0 + 20.0) == doctest::Approx(2.5));
  GridProfile dead({{0.0, 10.0}, {1.0, 0.0}}, 24.0);
  CHECK(std::isinf(dead.time_to_supply(0.5, 20.0)));
}

TEST_CASE("effective capacity") {
  FlowNetwork net;
  net.batteries = {{0, 3.0, 50.0}, {1, 4.0, 50.0}, {2, 5.0, 50.0}};
  CHECK(effective_capacity(net) == doctest::Approx(9.0));
  net.converter_edges = {{0, 1, 0.5, 2}, {1, 2, 0.5, 2}};
  CHECK(effective_capacity(net) == doctest::Approx(10.5));
}
