#include "bess/plaza.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <json.hpp>

namespace bess {

GridProfile::GridProfile(std::vector<std::pair<double, double>> breakpoints, double end_h)
    : points_(std::move(breakpoints)), end_h_(end_h) {
  if (points_.empty()) throw std::invalid_argument("grid profile: no breakpoints");
  if (points_.front().first != 0.0)
    throw std::invalid_argument("grid profile: first breakpoint must start at 0 h");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto [t, p] = points_[i];
    if (!std::isfinite(t) || !std::isfinite(p))
      throw std::invalid_argument("grid profile: non-finite breakpoint");
    if (p < 0.0) throw std::invalid_argument("grid profile: negative power");
    if (i > 0 && !(t > points_[i - 1].first))
      throw std::invalid_argument("grid profile: breakpoints must be strictly increasing");
  }
  if (!(end_h_ > points_.back().first))
    throw std::invalid_argument("grid profile: last breakpoint must precede the end of the day");
}

GridProfile GridProfile::from_csv(std::istream& in, double end_h) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("grid profile: empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time_h,power_kw")
    throw std::invalid_argument("grid profile: expected header 'time_h,power_kw'");
  std::vector<std::pair<double, double>> pts;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("grid profile: line " + std::to_string(lineno) + " has no comma");
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      const double t = std::stod(a, &used);
      if (used != a.size()) throw std::invalid_argument("trailing");
      const double p = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument("trailing");
      pts.push_back({t, p});
    } catch (const std::exception&) {
      throw std::invalid_argument("grid profile: line " + std::to_string(lineno) +
                                  " is not two numbers");
    }
  }
  return GridProfile(std::move(pts), end_h);
}

GridProfile GridProfile::from_csv_file(const std::string& path, double end_h) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("grid profile: cannot open " + path);
  return from_csv(in, end_h);
}

GridProfile GridProfile::default_profile() {
  return GridProfile({{0.0, 60.0}, {6.0, 45.0}, {10.0, 30.0}, {16.0, 40.0}, {20.0, 55.0}}, 24.0);
}

double GridProfile::power_at(double t_h) const {
  if (points_.empty()) return 0.0;
  auto it = std::upper_bound(points_.begin(), points_.end(), t_h,
                             [](double t, const auto& bp) { return t < bp.first; });
  if (it == points_.begin()) return points_.front().second;
  return std::prev(it)->second;
}

double GridProfile::min_power() const {
  double m = kInf;
  for (const auto& bp : points_) m = std::min(m, bp.second);
  return m;
}

double GridProfile::time_to_supply(double t0, double energy_kwh) const {
  if (energy_kwh <= 0.0) return 0.0;
  double t = t0, left = energy_kwh;
  // Segments past the last breakpoint repeat its power indefinitely.
  for (;;) {
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double x, const auto& bp) { return x < bp.first; });
    const double p = it == points_.begin() ? points_.front().second : std::prev(it)->second;
    const double seg_end = it == points_.end() ? kInf : it->first;
    if (p > 0.0 && left <= p * (seg_end - t)) return t + left / p - t0;
    if (!std::isfinite(seg_end)) return kInf;
    left -= p * (seg_end - t);
    t = seg_end;
  }
}

std::string GridProfile::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17) << "time_h,power_kw\n";
  for (const auto& [t, p] : points_) os << t << ',' << p << '\n';
  return os.str();
}

DayTrajectory simulate_day(const BessMonolith& bess, const GridProfile& grid,
                           const ArrivalModel& arrivals, const DemandModel& demand,
                           double charger_max_kw, double horizon_h, std::uint64_t seed) {
  if (!(charger_max_kw > 0.0)) throw std::invalid_argument("simulate_day: charger_max must be > 0");
  if (!(arrivals.rate_per_h > 0.0)) throw std::invalid_argument("simulate_day: arrival rate must be > 0");
  if (!(horizon_h > 0.0)) throw std::invalid_argument("simulate_day: horizon must be > 0");
  if (!(bess.effective_capacity >= 0.0) || bess.max_discharge_power < 0.0)
    throw std::invalid_argument("simulate_day: invalid BESS parameters");
  if (!(demand.mean_kwh > 0.0 && demand.mean_kwh <= demand.max_kwh) || demand.std_kwh < 0.0)
    throw std::invalid_argument("simulate_day: demand needs 0 < mean <= max and std >= 0");
  if (grid.breakpoints().empty()) throw std::invalid_argument("simulate_day: empty grid profile");

  DayTrajectory traj;
  traj.horizon_h = horizon_h;
  traj.capacity_kwh = bess.effective_capacity;
  traj.grid = grid;

  boost::random::mt19937_64 engine(seed);
  boost::random::exponential_distribution<double> standby(arrivals.rate_per_h);
  boost::random::normal_distribution<double> demand_draw(demand.mean_kwh,
                                                         std::max(demand.std_kwh, 1e-300));
  const double cap = bess.effective_capacity;
  double ready = 0.0;
  for (std::size_t n = 0;; ++n) {
    const double start = ready + standby(engine);
    double e_ev = demand.mean_kwh;
    if (demand.std_kwh > 0.0) e_ev = demand_draw(engine);
    e_ev = std::clamp(e_ev, 0.0, demand.max_kwh);
    if (start >= horizon_h) break;

    ChargeCycle c;
    c.index = n;
    c.start_h = start;
    c.demand_kwh = e_ev;
    c.bess_energy_at_start = cap;
    const double p_ag = grid.power_at(start);
    c.grid_power_kw = p_ag;

    double bess_power = 0.0;
    if (p_ag < charger_max_kw) bess_power = std::min(bess.max_discharge_power, charger_max_kw - p_ag);
    if (cap <= 0.0) bess_power = 0.0;
    const double p_full = std::min(charger_max_kw, p_ag) + bess_power;
    c.full_power_kw = p_full;
    c.bess_power_kw = bess_power;

    double t_full = p_full > 0.0 ? e_ev / p_full : 0.0;
    if (bess_power > 0.0) t_full = std::min(t_full, cap / bess_power);
    c.full_power_h = t_full;
    c.bess_delivered_kwh = std::min(cap, bess_power * t_full);
    double rest = e_ev - p_full * t_full;
    if (rest <= 1e-12 * std::max(1.0, e_ev)) rest = 0.0;
    if (rest > 0.0) {
      if (p_ag > 0.0) {
        c.curtailed_h = rest / p_ag;
      } else {
        c.unmet_kwh = rest;
      }
    }

    const double charge_end = start + c.charging_h();
    if (c.bess_delivered_kwh > 0.0) {
      c.recharge_h = p_ag > 0.0 ? c.bess_delivered_kwh / p_ag
                                : grid.time_to_supply(charge_end, c.bess_delivered_kwh);
    }
    c.truncated = c.end_h() > horizon_h;
    traj.cycles.push_back(c);
    ready = c.end_h();
    if (!std::isfinite(ready)) break;
  }
  return traj;
}

std::vector<SeriesSample> DayTrajectory::series(double step_h) const {
  std::vector<SeriesSample> out;
  const auto steps = static_cast<std::size_t>(std::floor(horizon_h / step_h + 1e-9));
  std::size_t ci = 0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * step_h;
    SeriesSample s;
    s.t_h = t;
    s.p_grid = grid.breakpoints().empty() ? 0.0 : grid.power_at(t);
    s.e_bess = capacity_kwh;
    while (ci < cycles.size() && cycles[ci].end_h() <= t) ++ci;
    if (ci < cycles.size() && cycles[ci].start_h <= t) {
      const ChargeCycle& c = cycles[ci];
      const double t1 = c.start_h + c.full_power_h;
      const double t2 = t1 + c.curtailed_h;
      if (t < t1) {
        s.p_ev = c.full_power_kw;
        s.p_bess = c.bess_power_kw;
        s.e_bess = capacity_kwh - c.bess_power_kw * (t - c.start_h);
      } else if (t < t2) {
        s.p_ev = c.grid_power_kw;
        s.e_bess = capacity_kwh - c.bess_delivered_kwh;
      } else {
        const double p_rc = c.recharge_h > 0.0 ? c.bess_delivered_kwh / c.recharge_h : 0.0;
        s.p_bess = -p_rc;
        s.e_bess = capacity_kwh - c.bess_delivered_kwh + p_rc * (t - t2);
      }
      s.e_bess = std::clamp(s.e_bess, 0.0, capacity_kwh);
    }
    out.push_back(s);
  }
  return out;
}

std::string DayTrajectory::cycles_json() const {
  nlohmann::ordered_json j;
  j["horizon_h"] = horizon_h;
  j["capacity_kwh"] = capacity_kwh;
  j["cycles"] = nlohmann::ordered_json::array();
  for (const auto& c : cycles) {
    nlohmann::ordered_json o;
    o["index"] = c.index;
    o["start_h"] = c.start_h;
    o["demand_kwh"] = c.demand_kwh;
    o["grid_power_kw"] = c.grid_power_kw;
    o["full_power_kw"] = c.full_power_kw;
    o["full_power_h"] = c.full_power_h;
    o["curtailed_h"] = c.curtailed_h;
    o["bess_delivered_kwh"] = c.bess_delivered_kwh;
    o["recharge_h"] = std::isfinite(c.recharge_h) ? nlohmann::ordered_json(c.recharge_h)
                                                  : nlohmann::ordered_json(nullptr);
    o["unmet_kwh"] = c.unmet_kwh;
    o["truncated"] = c.truncated;
    j["cycles"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::string DayTrajectory::series_csv(double step_h) const {
  std::ostringstream os;
  os << "t,p_grid,p_bess,e_bess,p_ev\n" << std::setprecision(10);
  for (const auto& s : series(step_h))
    os << s.t_h << ',' << s.p_grid << ',' << s.p_bess << ',' << s.e_bess << ',' << s.p_ev << '\n';
  return os.str();
}

double effective_capacity(const FlowNetwork& net) {
  return max_deliverable_energy(net).total_output;
}

CurtailmentStats curtailed_minutes_per_ev(const DayTrajectory& traj) {
  CurtailmentStats s;
  if (traj.cycles.empty()) return s;
  s.empty = false;
  double sum = 0.0;
  for (const auto& c : traj.cycles) {
    const double m = c.curtailed_h * 60.0;
    sum += m;
    s.max_minutes = std::max(s.max_minutes, m);
  }
  s.mean_minutes = sum / static_cast<double>(traj.cycles.size());
  return s;
}

}  // namespace bess
