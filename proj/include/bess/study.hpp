#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bess/designer.hpp"
#include "bess/plaza.hpp"
#include "bess/scenario.hpp"

namespace bess {

inline constexpr const char* kToolName = "bess_cli";
inline constexpr const char* kToolVersion = "1.0.0";

/// Output files by relative name plus a manifest. Contents depend only on the
/// scenario, the seed and the tool version.
struct StudyResult {
  std::map<std::string, std::string> files;
  nlohmann::ordered_json manifest;

  /// Writes every file and manifest.json into `dir`, creating it if needed.
  void write(const std::filesystem::path& dir) const;
};

/// Packs, Layer 1 design and expected set shared by every study.
TradeoffContext make_context(const Scenario& s, std::size_t workers = 1);

struct TradeoffRow {
  TradeoffPoint point;
  double converter_efficiency = 1.0;
};

std::vector<TradeoffRow> compute_tradeoff(const Scenario& s, const TradeoffContext& ctx,
                                          std::size_t workers = 1);

StudyResult run_tradeoff(const Scenario& s, std::size_t workers = 1);
StudyResult run_design(const Scenario& s, std::size_t workers = 1);

struct DayAudit {
  std::size_t cycles = 0;
  double max_balance_residual = 0.0;  // kWh
  bool balance_ok = true;
  bool full_at_start = true;
  bool no_overlap = true;
};

DayAudit audit_day(const DayTrajectory& traj, double charger_max_kw);

/// Single-day exemplar for `kind` on the scenario's day settings.
DayTrajectory simulate_exemplar_day(const Scenario& s, const TradeoffContext& ctx,
                                    ArchitectureKind kind);

/// All configured kinds when `kinds` is empty.
StudyResult run_day(const Scenario& s, const std::vector<ArchitectureKind>& kinds = {},
                    std::size_t workers = 1);

struct CellStats {
  ArchitectureKind kind = ArchitectureKind::lshippp;
  double mean_kwh = 0.0;
  double std_kwh = 0.0;
  double rate_per_h = 0.0;
  std::size_t days = 0;
  std::size_t cycles = 0;
  UtilizationStats output;  // per-cycle BESS output over the pack's cycle window
  double curtailed_sum_min = 0.0;
  double curtailed_max_min = 0.0;
  double gap_sum_kwh = 0.0;
  double unmet_sum_kwh = 0.0;
  double curtailed_mean_min() const { return cycles ? curtailed_sum_min / cycles : 0.0; }
  double deviation() const { return std_kwh / mean_kwh; }
};

struct GapBucket {
  ArchitectureKind kind = ArchitectureKind::lshippp;
  std::size_t index = 0;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  std::size_t count = 0;
  UtilizationStats output;
};

struct KindSummary {
  ArchitectureKind kind = ArchitectureKind::lshippp;
  double rating_r = 0.0;
  double utilization = 0.0;  // U_E: mean over packs at rating_r
  double worst_gap_threshold = 0.0;
  std::size_t worst_cycles = 0;
  double worst_output_mean = 0.0;
  double worst_output_std = 0.0;
  double derating = 0.0;
  double captured_value = 0.0;  // kWh
  double expected_intrinsic = 0.0;
};

struct EnsembleResult {
  std::vector<CellStats> cells;
  std::vector<GapBucket> buckets;
  std::vector<KindSummary> kinds;

  /// Curtailed minutes per EV pooled over arrival rates for one demand cell.
  double pooled_curtailed_minutes(ArchitectureKind kind, double mean_kwh, double std_kwh) const;
  /// Mean per-cycle output pooled over arrival rates for one demand cell.
  double pooled_output_mean(ArchitectureKind kind, double mean_kwh, double std_kwh) const;
  const KindSummary* summary(ArchitectureKind kind) const;
};

EnsembleResult compute_ensemble(const Scenario& s, const TradeoffContext& ctx,
                                std::size_t workers = 1);
StudyResult run_ensemble(const Scenario& s, std::size_t workers = 1);

/// Lowercase file-name form of a kind: "lshippp", "cppp", "fpp".
std::string kind_slug(ArchitectureKind kind);

}  // namespace bess
