#include "bess/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bess/metrics.hpp"
#include "bess/parallel.hpp"
#include "bess/seeding.hpp"

namespace bess {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::ordered_json jnum(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void finish(StudyResult& r, const Scenario& s, const std::string& study) {
  nlohmann::ordered_json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["study"] = study;
  m["seed"] = s.seed;
  m["config_hash"] = hex64(s.config_hash());
  m["scenario"] = s.to_json();
  nlohmann::ordered_json files = nlohmann::ordered_json::object();
  for (const auto& [name, content] : r.files) files[name] = hex64(fnv1a(content));
  m["files"] = files;
  r.manifest = std::move(m);
}

std::size_t layer1_size(const Scenario& s) {
  const ArchitectureConfig* c = s.find(ArchitectureKind::lshippp);
  return c ? c->n_layer1 : 3;
}

std::string layer1_json(const Scenario& s, const TradeoffContext& ctx) {
  const ExpectedSet expected = flatten_distribution(s.supply, s.n_modules);
  const Layer1Design& d = ctx.layer1;
  nlohmann::ordered_json j;
  j["n_modules"] = d.n_batteries;
  j["n_layer1"] = d.edges.size();
  j["max_span"] = s.max_span;
  j["placements_searched"] = enumerate_placements(s.n_modules, d.edges.size(), s.max_span).size();
  j["horizon_h"] = d.horizon;
  nlohmann::ordered_json caps = nlohmann::ordered_json::array();
  for (const auto& b : expected.batteries) caps.push_back(b.capacity);
  j["expected_set_kwh"] = caps;
  j["expected_intrinsic_kwh"] = ctx.expected_intrinsic;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& [a, b] : d.edges) edges.push_back({a, b});
  j["edges"] = edges;
  j["optimal_flows_kwh"] = d.optimal_flows;
  j["aggregate_energy_kwh"] = d.aggregate_energy();
  j["rating_kw"] = d.rating;
  j["expected_output_kwh"] = d.expected_output;
  j["expected_utilization"] = d.expected_output / ctx.expected_intrinsic;
  j["pack_hash"] = hex64(pack_hash(ctx.packs));
  return j.dump(2) + "\n";
}

std::string stats_header(const std::string& prefix) {
  return prefix + "_mean," + prefix + "_std," + prefix + "_idr," + prefix + "_p10," + prefix + "_p90";
}

std::string stats_row(const UtilizationStats& u) {
  return num(u.mean) + "," + num(u.stddev) + "," + num(u.idr()) + "," + num(u.p10) + "," + num(u.p90);
}

}  // namespace

std::string kind_slug(ArchitectureKind kind) {
  switch (kind) {
    case ArchitectureKind::fpp: return "fpp";
    case ArchitectureKind::cppp: return "cppp";
    case ArchitectureKind::lshippp: return "lshippp";
  }
  return "unknown";
}

void StudyResult::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
  };
  for (const auto& [name, content] : files) put(name, content);
  put("manifest.json", manifest.dump(2) + "\n");
}

TradeoffContext make_context(const Scenario& s, std::size_t workers) {
  TradeoffContext ctx;
  ctx.packs = sample_packs(s.supply, s.n_modules, s.n_packs, derive_seed(s.seed, {fnv1a("packs")}));
  const ExpectedSet expected = flatten_distribution(s.supply, s.n_modules);
  ctx.expected_intrinsic = expected.total_capacity();
  ctx.horizon = s.horizon_h;
  ctx.layer1 = design_layer1(expected, layer1_size(s), s.horizon_h, s.max_span, workers);
  return ctx;
}

std::vector<TradeoffRow> compute_tradeoff(const Scenario& s, const TradeoffContext& ctx,
                                          std::size_t workers) {
  std::vector<TradeoffRow> rows;
  for (const auto& c : s.architectures) {
    for (const auto& pt : tradeoff_curve(c.kind, ctx, s.r_grid, workers))
      rows.push_back({pt, c.converter_efficiency});
  }
  return rows;
}

StudyResult run_tradeoff(const Scenario& s, std::size_t workers) {
  const TradeoffContext ctx = make_context(s, workers);
  const auto rows = compute_tradeoff(s, ctx, workers);

  std::ostringstream t, e;
  t << "kind,R,lambda_h," << stats_header("util") << ",layer2_rating_kw\n";
  e << "kind,R,eta_c,system_efficiency,util_mean\n";
  for (const auto& r : rows) {
    const TradeoffPoint& p = r.point;
    t << to_string(p.kind) << ',' << num(p.total_normalized_rating) << ',' << num(p.lambda_h)
      << ',' << stats_row(p.utilization) << ',' << num(p.layer2_rating) << "\n";
    e << to_string(p.kind) << ',' << num(p.total_normalized_rating) << ','
      << num(r.converter_efficiency) << ','
      << num(system_efficiency(r.converter_efficiency, p.total_normalized_rating)) << ','
      << num(p.utilization.mean) << "\n";
  }
  StudyResult res;
  res.files["tradeoff.csv"] = t.str();
  res.files["efficiency.csv"] = e.str();
  res.files["layer1.json"] = layer1_json(s, ctx);
  finish(res, s, "tradeoff");
  return res;
}

StudyResult run_design(const Scenario& s, std::size_t workers) {
  const TradeoffContext ctx = make_context(s, workers);
  const auto pts = design_layer2(ctx.layer1, ctx.packs, ctx.expected_intrinsic, s.lambda_grid, workers);
  std::ostringstream os;
  os << "lambda_h,R,layer2_rating_kw," << stats_header("util") << "\n";
  for (const auto& p : pts)
    os << num(p.lambda_h) << ',' << num(p.total_normalized_rating) << ',' << num(p.layer2_rating)
       << ',' << stats_row(p.utilization) << "\n";
  StudyResult res;
  res.files["layer1.json"] = layer1_json(s, ctx);
  res.files["layer2.csv"] = os.str();
  finish(res, s, "design");
  return res;
}

DayAudit audit_day(const DayTrajectory& traj, double charger_max_kw) {
  DayAudit a;
  a.cycles = traj.cycles.size();
  double prev_end = -kInf;
  for (const auto& c : traj.cycles) {
    const double supplied = c.full_power_kw * c.full_power_h + c.grid_power_kw * c.curtailed_h + c.unmet_kwh;
    const double r1 = std::fabs(c.demand_kwh - supplied);
    const double r2 = std::fabs(c.bess_delivered_kwh - c.bess_power_kw * c.full_power_h);
    a.max_balance_residual = std::max({a.max_balance_residual, r1, r2});
    const double tol = 1e-9 * std::max(1.0, c.demand_kwh);
    if (r1 > tol || r2 > tol) a.balance_ok = false;
    if (c.full_power_kw > charger_max_kw * (1.0 + 1e-12)) a.balance_ok = false;
    if (c.bess_delivered_kwh > traj.capacity_kwh * (1.0 + 1e-12)) a.balance_ok = false;
    if (c.bess_energy_at_start != traj.capacity_kwh) a.full_at_start = false;
    if (c.start_h < prev_end) a.no_overlap = false;
    prev_end = c.end_h();
  }
  return a;
}

namespace {

DayTrajectory simulate_for(const Scenario& s, double pack_window_kwh, double rate,
                           double mean_kwh, double std_kwh, std::uint64_t seed) {
  BessMonolith bess;
  bess.effective_capacity = pack_window_kwh;
  bess.remaining_energy = pack_window_kwh;
  bess.max_discharge_power = s.plaza.bess_max_kw;
  DemandModel d{mean_kwh, std_kwh, s.plaza.max_demand_factor * mean_kwh};
  return simulate_day(bess, s.plaza.grid, ArrivalModel{rate}, d, s.plaza.charger_max_kw,
                      s.plaza.day_h, seed);
}

double pack_effective(const Scenario& s, const TradeoffContext& ctx, ArchitectureKind kind,
                      std::size_t pack) {
  return max_deliverable_energy(
             build_architecture(kind, ctx.packs.at(pack), ctx, s.rating_for(kind)))
      .total_output;
}

}  // namespace

DayTrajectory simulate_exemplar_day(const Scenario& s, const TradeoffContext& ctx,
                                    ArchitectureKind kind) {
  const PlazaSettings& p = s.plaza;
  const double eff = pack_effective(s, ctx, kind, p.day_pack_index);
  return simulate_for(s, p.cycle_dod * eff, p.day_arrival_rate_per_h, p.day_demand_mean_kwh,
                      p.day_demand_std_kwh, derive_seed(s.seed, {fnv1a("day")}));
}

StudyResult run_day(const Scenario& s, const std::vector<ArchitectureKind>& kinds,
                    std::size_t workers) {
  const TradeoffContext ctx = make_context(s, workers);
  std::vector<ArchitectureKind> todo = kinds;
  if (todo.empty())
    for (const auto& c : s.architectures) todo.push_back(c.kind);

  StudyResult res;
  nlohmann::ordered_json audit = nlohmann::ordered_json::array();
  for (ArchitectureKind k : todo) {
    const DayTrajectory traj = simulate_exemplar_day(s, ctx, k);
    res.files["day_" + kind_slug(k) + ".json"] = traj.cycles_json();
    res.files["day_" + kind_slug(k) + ".csv"] = traj.series_csv();
    const DayAudit a = audit_day(traj, s.plaza.charger_max_kw);
    const CurtailmentStats cs = curtailed_minutes_per_ev(traj);
    double pedestal = 0.0;
    for (const auto& c : traj.cycles) pedestal += c.curtailed_h * 60.0;
    audit.push_back({{"kind", to_string(k)},
                     {"bess_window_kwh", traj.capacity_kwh},
                     {"cycles", a.cycles},
                     {"energy_balance_ok", a.balance_ok},
                     {"max_balance_residual_kwh", a.max_balance_residual},
                     {"full_at_cycle_start", a.full_at_start},
                     {"no_overlap", a.no_overlap},
                     {"curtailed_total_min", pedestal},
                     {"curtailed_mean_min", cs.empty ? jnum(kInf) : jnum(cs.mean_minutes)},
                     {"curtailed_max_min", cs.empty ? jnum(kInf) : jnum(cs.max_minutes)}});
  }
  res.files["audit.json"] = audit.dump(2) + "\n";
  finish(res, s, "day");
  return res;
}

double EnsembleResult::pooled_curtailed_minutes(ArchitectureKind kind, double mean_kwh,
                                                double std_kwh) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells)
    if (c.kind == kind && c.mean_kwh == mean_kwh && c.std_kwh == std_kwh) {
      sum += c.curtailed_sum_min;
      n += c.cycles;
    }
  return n ? sum / static_cast<double>(n) : 0.0;
}

double EnsembleResult::pooled_output_mean(ArchitectureKind kind, double mean_kwh,
                                          double std_kwh) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells)
    if (c.kind == kind && c.mean_kwh == mean_kwh && c.std_kwh == std_kwh) {
      sum += c.output.mean * static_cast<double>(c.cycles);
      n += c.cycles;
    }
  return n ? sum / static_cast<double>(n) : 0.0;
}

const KindSummary* EnsembleResult::summary(ArchitectureKind kind) const {
  for (const auto& k : kinds)
    if (k.kind == kind) return &k;
  return nullptr;
}

namespace {

struct CycleRecord {
  double gap = 0.0;
  double output = 0.0;  // delivered over the pack's cycle window
  double curtailed_min = 0.0;
  double unmet_kwh = 0.0;
};

struct DemandCell {
  double mean_kwh, std_kwh, rate_per_h;
};

}  // namespace

EnsembleResult compute_ensemble(const Scenario& s, const TradeoffContext& ctx,
                                std::size_t workers) {
  const PlazaSettings& p = s.plaza;
  std::vector<DemandCell> demand;
  for (double m : p.demand_means_kwh)
    for (double sd : p.demand_stds_kwh)
      for (double r : p.arrival_rates_per_h) demand.push_back({m, sd, r});

  const std::size_t n_packs = ctx.packs.size();
  std::vector<double> intrinsic(n_packs);
  for (std::size_t k = 0; k < n_packs; ++k) intrinsic[k] = total_capacity(ctx.packs[k]);

  EnsembleResult out;
  for (const auto& arch : s.architectures) {
    const ArchitectureKind kind = arch.kind;
    const double rating = arch.normalized_rating;
    const std::vector<double> eff = deliverable_samples(kind, ctx, rating, workers);

    std::vector<double> pool_gap, pool_out;
    for (std::size_t ci = 0; ci < demand.size(); ++ci) {
      const DemandCell& dc = demand[ci];
      std::vector<std::vector<CycleRecord>> days(s.n_trajectories);
      parallel_for(s.n_trajectories, workers, [&](std::size_t t) {
        const std::size_t pk = t % n_packs;
        const double window = p.cycle_dod * intrinsic[pk];
        // The day seed ignores the kind so every kind sees the same arrivals and demands.
        const std::uint64_t seed = derive_seed(s.seed, {fnv1a("ensemble"), ci, t});
        const DayTrajectory traj =
            simulate_for(s, p.cycle_dod * eff[pk], dc.rate_per_h, dc.mean_kwh, dc.std_kwh, seed);
        auto& rec = days[t];
        rec.reserve(traj.cycles.size());
        for (const auto& c : traj.cycles) {
          CycleRecord r;
          r.gap = grid_ev_energy_gap(c.demand_kwh, c.grid_power_kw, c.demand_kwh / p.charger_max_kw);
          r.output = window > 0.0 ? c.bess_delivered_kwh / window : 0.0;
          r.curtailed_min = c.curtailed_h * 60.0;
          r.unmet_kwh = c.unmet_kwh;
          rec.push_back(r);
        }
      });

      CellStats cell;
      cell.kind = kind;
      cell.mean_kwh = dc.mean_kwh;
      cell.std_kwh = dc.std_kwh;
      cell.rate_per_h = dc.rate_per_h;
      cell.days = s.n_trajectories;
      std::vector<double> outs;
      for (const auto& day : days)
        for (const auto& r : day) {
          outs.push_back(r.output);
          pool_out.push_back(r.output);
          pool_gap.push_back(r.gap);
          cell.curtailed_sum_min += r.curtailed_min;
          cell.curtailed_max_min = std::max(cell.curtailed_max_min, r.curtailed_min);
          cell.gap_sum_kwh += r.gap;
          cell.unmet_sum_kwh += r.unmet_kwh;
        }
      cell.cycles = outs.size();
      cell.output = summarize(outs);
      out.cells.push_back(cell);
    }

    KindSummary ks;
    ks.kind = kind;
    ks.rating_r = rating;
    ks.expected_intrinsic = ctx.expected_intrinsic;
    const std::vector<double> util = utilization_samples(kind, ctx, rating, workers);
    ks.utilization = mean(util);
    if (pool_gap.size() >= 10) {
      std::vector<double> edges(11);
      for (std::size_t b = 0; b <= 10; ++b) edges[b] = quantile(pool_gap, static_cast<double>(b) / 10.0);
      std::vector<std::vector<double>> bucket(10);
      for (std::size_t i = 0; i < pool_gap.size(); ++i) {
        const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, pool_gap[i]);
        bucket[static_cast<std::size_t>(it - (edges.begin() + 1))].push_back(pool_out[i]);
      }
      for (std::size_t b = 0; b < 10; ++b) {
        GapBucket gb;
        gb.kind = kind;
        gb.index = b;
        gb.gap_lo = edges[b];
        gb.gap_hi = edges[b + 1];
        gb.count = bucket[b].size();
        gb.output = summarize(bucket[b]);
        out.buckets.push_back(gb);
      }
      const std::vector<double>& worst = bucket[9];
      ks.worst_gap_threshold = edges[9];
      ks.worst_cycles = worst.size();
      if (worst.size() >= 2) {
        ks.worst_output_mean = mean(worst);
        ks.worst_output_std = stddev(worst);
        ks.derating = derating_factor(worst);
      }
    }
    ks.captured_value = captured_value(ks.derating, ks.utilization, ctx.expected_intrinsic);
    out.kinds.push_back(ks);
  }
  return out;
}

StudyResult run_ensemble(const Scenario& s, std::size_t workers) {
  const TradeoffContext ctx = make_context(s, workers);
  const EnsembleResult e = compute_ensemble(s, ctx, workers);

  std::ostringstream cells;
  cells << "kind,demand_mean_kwh,demand_std_kwh,deviation,arrival_rate_per_h,days,cycles,"
        << stats_header("output")
        << ",curtailed_mean_min,curtailed_max_min,gap_mean_kwh,unmet_mean_kwh\n";
  for (const auto& c : e.cells) {
    const double n = c.cycles ? static_cast<double>(c.cycles) : 1.0;
    cells << to_string(c.kind) << ',' << num(c.mean_kwh) << ',' << num(c.std_kwh) << ','
          << num(c.deviation()) << ',' << num(c.rate_per_h) << ',' << c.days << ',' << c.cycles
          << ',' << stats_row(c.output) << ',' << num(c.curtailed_mean_min()) << ','
          << num(c.curtailed_max_min) << ',' << num(c.gap_sum_kwh / n) << ','
          << num(c.unmet_sum_kwh / n) << "\n";
  }

  std::ostringstream buckets;
  buckets << "kind,bucket,gap_lo_kwh,gap_hi_kwh,cycles," << stats_header("output") << "\n";
  for (const auto& b : e.buckets)
    buckets << to_string(b.kind) << ',' << b.index << ',' << num(b.gap_lo) << ',' << num(b.gap_hi)
            << ',' << b.count << ',' << stats_row(b.output) << "\n";

  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (const auto& k : e.kinds) {
    MetricReport m;
    m.utilization = k.utilization;
    m.normalized_rating = k.rating_r;
    const ArchitectureConfig* cfg = s.find(k.kind);
    m.system_efficiency = system_efficiency(cfg ? cfg->converter_efficiency : 1.0, k.rating_r);
    m.sigma = k.worst_output_std;
    m.derating = k.derating;
    m.captured_value = k.captured_value;
    m.intrinsic_capacity = k.expected_intrinsic;
    for (const auto& b : e.buckets)
      if (b.kind == k.kind && b.index == 9) m.idr = b.output.idr();
    nlohmann::ordered_json j;
    j["kind"] = to_string(k.kind);
    j["metrics"] = nlohmann::ordered_json::parse(m.to_json());
    j["worst_gap_threshold_kwh"] = k.worst_gap_threshold;
    j["worst_cycles"] = k.worst_cycles;
    j["worst_output_mean"] = k.worst_output_mean;
    j["derated_utilization"] = k.derating * k.utilization;
    summary.push_back(j);
  }

  StudyResult res;
  res.files["ensemble.csv"] = cells.str();
  res.files["gap_buckets.csv"] = buckets.str();
  res.files["summary.json"] = summary.dump(2) + "\n";
  finish(res, s, "ensemble");
  return res;
}

}  // namespace bess
