#include "bess/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bess/designer.hpp"
#include "bess/seeding.hpp"

namespace bess {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream os;
  os << "invalid scenario (" << problems.size() << " problem" << (problems.size() == 1 ? "" : "s")
     << "):";
  for (const auto& p : problems) os << "\n  - " << p;
  return os.str();
}

// Reads optional keys, recording type errors instead of throwing.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string where, std::vector<std::string>& problems)
      : j_(j), where_(std::move(where)), problems_(problems) {
    if (!j_.is_object()) problems_.push_back(where_ + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    if (!j_.is_object() || !j_.contains(key) || j_.at(key).is_null()) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      problems_.push_back(where_ + "." + key + ": wrong type");
    }
  }

  bool has(const char* key) const {
    return j_.is_object() && j_.contains(key) && !j_.at(key).is_null();
  }
  const nlohmann::json& at(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }
  void mark(const char* key) { seen_.insert(key); }

  void reject_unknown() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) problems_.push_back(where_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

std::vector<double> default_demand_stds() { return linear_grid(5.0, 25.0, 10); }

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

Scenario Scenario::defaults() {
  return from_json(nlohmann::json::object());
}

Scenario Scenario::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  std::vector<std::string> problems;
  Scenario s;
  Reader top(j, "scenario", problems);
  top.get("name", s.name);
  top.get("seed", s.seed);

  if (top.has("supply")) {
    Reader r(top.at("supply"), "supply", problems);
    r.get("mean_kwh", s.supply.mean_capacity);
    r.get("std_kwh", s.supply.std_capacity);
    r.get("dod", s.supply.depth_of_discharge);
    r.get("voltage_v", s.supply.nominal_voltage);
    r.get("n_modules", s.n_modules);
    r.reject_unknown();
  }

  top.get("horizon_h", s.horizon_h);
  top.get("r_grid", s.r_grid);
  if (top.has("design")) {
    Reader r(top.at("design"), "design", problems);
    r.get("max_span", s.max_span);
    r.get("lambda_grid", s.lambda_grid);
    r.reject_unknown();
  }
  if (top.has("samples")) {
    Reader r(top.at("samples"), "samples", problems);
    r.get("packs", s.n_packs);
    r.get("trajectories", s.n_trajectories);
    r.reject_unknown();
  }

  if (top.has("plaza")) {
    Reader r(top.at("plaza"), "plaza", problems);
    PlazaSettings& p = s.plaza;
    r.get("charger_max_kw", p.charger_max_kw);
    r.get("bess_max_kw", p.bess_max_kw);
    r.get("day_h", p.day_h);
    r.get("cycle_dod", p.cycle_dod);
    r.get("max_demand_factor", p.max_demand_factor);
    r.get("arrival_rates_per_h", p.arrival_rates_per_h);
    r.get("demand_means_kwh", p.demand_means_kwh);
    r.get("demand_stds_kwh", p.demand_stds_kwh);
    r.get("grid_profile", p.grid_profile_path);
    if (r.has("grid_profile_breakpoints")) {
      std::vector<std::pair<double, double>> pts;
      r.get("grid_profile_breakpoints", pts);
      if (!p.grid_profile_path.empty())
        problems.push_back("plaza: give grid_profile or grid_profile_breakpoints, not both");
      try {
        p.grid = GridProfile(pts, p.day_h);
      } catch (const std::invalid_argument& e) {
        problems.push_back(std::string("plaza.grid_profile_breakpoints: ") + e.what());
      }
    }
    if (r.has("day")) {
      Reader d(r.at("day"), "plaza.day", problems);
      d.get("arrival_rate_per_h", p.day_arrival_rate_per_h);
      d.get("demand_mean_kwh", p.day_demand_mean_kwh);
      d.get("demand_std_kwh", p.day_demand_std_kwh);
      d.get("pack_index", p.day_pack_index);
      d.reject_unknown();
    }
    r.reject_unknown();
  }

  bool explicit_archs = false;
  if (top.has("architectures")) {
    const auto& arr = top.at("architectures");
    if (!arr.is_array()) {
      problems.push_back("architectures: expected an array");
    } else {
      explicit_archs = true;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "architectures[" + std::to_string(i) + "]";
        Reader r(arr[i], where, problems);
        ArchitectureConfig c;
        c.n_batteries = s.n_modules;
        std::string kind;
        r.get("kind", kind);
        try {
          c.kind = parse_kind(kind);
        } catch (const std::invalid_argument& e) {
          problems.push_back(where + ".kind: " + e.what());
        }
        r.get("n_modules", c.n_batteries);
        r.get("n_layer1", c.n_layer1);
        r.get("lambda_h", c.hierarchical_ratio);
        r.get("rating_r", c.normalized_rating);
        r.get("eta_c", c.converter_efficiency);
        r.get("horizon_h", c.horizon);
        if (!r.has("horizon_h")) c.horizon = 0.0;  // resolved below
        r.reject_unknown();
        s.architectures.push_back(c);
      }
    }
  }
  top.mark("architectures");
  top.mark("supply");
  top.mark("design");
  top.mark("samples");
  top.mark("plaza");
  top.reject_unknown();

  // Defaults that depend on other fields.
  if (!explicit_archs) {
    for (ArchitectureKind k : {ArchitectureKind::lshippp, ArchitectureKind::cppp, ArchitectureKind::fpp}) {
      ArchitectureConfig c;
      c.kind = k;
      c.n_batteries = s.n_modules;
      c.horizon = 0.0;
      s.architectures.push_back(c);
    }
  }
  if (s.plaza.demand_stds_kwh.empty()) s.plaza.demand_stds_kwh = default_demand_stds();
  if (s.lambda_grid.empty()) s.lambda_grid = default_lambda_grid();
  if (s.r_grid.empty()) s.r_grid = linear_grid(0.05, 1.0, 20);
  if (s.max_span == 0 && s.n_modules >= 2) s.max_span = s.n_modules - 1;
  if (s.horizon_h == 0.0 && s.n_modules >= 2 && s.plaza.bess_max_kw > 0.0) {
    try {
      s.supply.check();
      s.horizon_h = flatten_distribution(s.supply, s.n_modules).total_capacity() / s.plaza.bess_max_kw;
    } catch (const std::exception&) {
      // reported by check()
    }
  }
  for (auto& c : s.architectures)
    if (c.horizon == 0.0) c.horizon = s.horizon_h;

  if (!s.plaza.grid_profile_path.empty()) {
    std::filesystem::path p = s.plaza.grid_profile_path;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) {
      problems.push_back("plaza.grid_profile: file not found: " + p.string());
    } else {
      try {
        s.plaza.grid = GridProfile::from_csv_file(p.string(), s.plaza.day_h);
      } catch (const std::invalid_argument& e) {
        problems.push_back(std::string("plaza.grid_profile: ") + e.what());
      }
    }
  }

  try {
    s.check();
  } catch (const ScenarioError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  if (!problems.empty()) throw ScenarioError(problems);
  return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot open scenario file " + path.string()});
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError({std::string("scenario is not valid JSON: ") + e.what()});
  }
  return from_json(j, path.parent_path());
}

void Scenario::check() const {
  std::vector<std::string> problems;
  try {
    supply.check();
  } catch (const std::invalid_argument& e) {
    problems.push_back(e.what());
  }
  if (n_modules < 2) problems.push_back("supply.n_modules must be >= 2");
  if (!(horizon_h > 0.0)) problems.push_back("horizon_h must be > 0");
  if (max_span < 1 || (n_modules >= 2 && max_span > n_modules - 1))
    problems.push_back("design.max_span must be in [1, n_modules - 1]");
  if (lambda_grid.empty()) problems.push_back("design.lambda_grid must be nonempty");
  for (double l : lambda_grid)
    if (!(l >= 0.0)) problems.push_back("design.lambda_grid values must be >= 0");
  if (r_grid.empty()) problems.push_back("r_grid must be nonempty");
  for (double r : r_grid)
    if (!(r > 0.0 && r <= 1.0)) problems.push_back("r_grid values must lie in (0, 1]");
  if (n_packs < 1) problems.push_back("samples.packs must be >= 1");
  if (n_trajectories < 1) problems.push_back("samples.trajectories must be >= 1");
  if (architectures.empty()) problems.push_back("architectures must be nonempty");
  std::set<ArchitectureKind> kinds;
  for (const auto& c : architectures) {
    if (!kinds.insert(c.kind).second)
      problems.push_back("architectures: duplicate kind " + to_string(c.kind));
    if (c.n_batteries != n_modules)
      problems.push_back("architectures: n_modules must match supply.n_modules");
    try {
      c.check();
    } catch (const std::invalid_argument& e) {
      problems.push_back(e.what());
    }
  }
  const PlazaSettings& p = plaza;
  if (!(p.charger_max_kw > 0.0)) problems.push_back("plaza.charger_max_kw must be > 0");
  if (!(p.bess_max_kw > 0.0)) problems.push_back("plaza.bess_max_kw must be > 0");
  if (!(p.day_h > 0.0)) problems.push_back("plaza.day_h must be > 0");
  if (!(p.cycle_dod > 0.0 && p.cycle_dod <= 1.0)) problems.push_back("plaza.cycle_dod must be in (0, 1]");
  if (!(p.max_demand_factor >= 1.0)) problems.push_back("plaza.max_demand_factor must be >= 1");
  if (p.arrival_rates_per_h.empty()) problems.push_back("plaza.arrival_rates_per_h must be nonempty");
  for (double r : p.arrival_rates_per_h)
    if (!(r > 0.0)) problems.push_back("plaza.arrival_rates_per_h values must be > 0");
  if (p.demand_means_kwh.empty()) problems.push_back("plaza.demand_means_kwh must be nonempty");
  for (double m : p.demand_means_kwh)
    if (!(m > 0.0)) problems.push_back("plaza.demand_means_kwh values must be > 0");
  if (p.demand_stds_kwh.empty()) problems.push_back("plaza.demand_stds_kwh must be nonempty");
  for (double sd : p.demand_stds_kwh)
    if (!(sd >= 0.0)) problems.push_back("plaza.demand_stds_kwh values must be >= 0");
  if (!(p.day_arrival_rate_per_h > 0.0)) problems.push_back("plaza.day.arrival_rate_per_h must be > 0");
  if (!(p.day_demand_mean_kwh > 0.0)) problems.push_back("plaza.day.demand_mean_kwh must be > 0");
  if (!(p.day_demand_std_kwh >= 0.0)) problems.push_back("plaza.day.demand_std_kwh must be >= 0");
  if (p.day_pack_index >= n_packs) problems.push_back("plaza.day.pack_index must be < samples.packs");
  if (!problems.empty()) throw ScenarioError(problems);
}

nlohmann::ordered_json Scenario::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["seed"] = seed;
  j["supply"] = {{"mean_kwh", supply.mean_capacity},
                 {"std_kwh", supply.std_capacity},
                 {"dod", supply.depth_of_discharge},
                 {"voltage_v", supply.nominal_voltage},
                 {"n_modules", n_modules}};
  j["horizon_h"] = horizon_h;
  j["architectures"] = nlohmann::ordered_json::array();
  for (const auto& c : architectures) {
    j["architectures"].push_back({{"kind", to_string(c.kind)},
                                  {"n_modules", c.n_batteries},
                                  {"n_layer1", c.n_layer1},
                                  {"lambda_h", c.hierarchical_ratio},
                                  {"rating_r", c.normalized_rating},
                                  {"eta_c", c.converter_efficiency},
                                  {"horizon_h", c.horizon}});
  }
  j["design"] = {{"max_span", max_span}, {"lambda_grid", lambda_grid}};
  j["r_grid"] = r_grid;
  j["samples"] = {{"packs", n_packs}, {"trajectories", n_trajectories}};
  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  for (const auto& [t, pw] : plaza.grid.breakpoints()) grid.push_back({t, pw});
  j["plaza"] = {{"charger_max_kw", plaza.charger_max_kw},
                {"bess_max_kw", plaza.bess_max_kw},
                {"day_h", plaza.day_h},
                {"cycle_dod", plaza.cycle_dod},
                {"max_demand_factor", plaza.max_demand_factor},
                {"arrival_rates_per_h", plaza.arrival_rates_per_h},
                {"demand_means_kwh", plaza.demand_means_kwh},
                {"demand_stds_kwh", plaza.demand_stds_kwh},
                {"grid_profile_breakpoints", grid},
                {"day",
                 {{"arrival_rate_per_h", plaza.day_arrival_rate_per_h},
                  {"demand_mean_kwh", plaza.day_demand_mean_kwh},
                  {"demand_std_kwh", plaza.day_demand_std_kwh},
                  {"pack_index", plaza.day_pack_index}}}};
  return j;
}

std::uint64_t Scenario::config_hash() const { return fnv1a(to_json().dump()); }

const ArchitectureConfig* Scenario::find(ArchitectureKind kind) const {
  for (const auto& c : architectures)
    if (c.kind == kind) return &c;
  return nullptr;
}

double Scenario::rating_for(ArchitectureKind kind) const {
  const ArchitectureConfig* c = find(kind);
  return c ? c->normalized_rating : 0.2;
}

}  // namespace bess
