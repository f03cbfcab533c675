#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bess/scenario.hpp"
#include "bess/study.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  std::string out = "out";
};

void add_common(CLI::App* app, Common& c, bool with_out = true) {
  app->add_option("--scenario", c.scenario, "Scenario JSON (built-in default when omitted)");
  app->add_option("--seed", c.seed, "Override the scenario master seed");
  app->add_option("--workers", c.workers, "Worker threads (0: hardware concurrency)");
  if (with_out) app->add_option("--out", c.out, "Output directory");
}

bess::Scenario load(const Common& c) {
  bess::Scenario s = c.scenario.empty() ? bess::Scenario::defaults() : bess::Scenario::load(c.scenario);
  if (c.seed) s.seed = *c.seed;
  return s;
}

std::size_t workers(const Common& c) {
  if (c.workers > 0) return c.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

void report(const bess::StudyResult& r, const std::string& dir) {
  r.write(dir);
  for (const auto& [name, content] : r.files) std::cout << dir << "/" << name << "\n";
  std::cout << dir << "/manifest.json\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-use battery storage architecture studies"};
  app.require_subcommand(1);

  Common tradeoff, design, day, ensemble, validate;
  std::vector<std::string> day_kinds;
  add_common(app.add_subcommand("tradeoff", "Utilization versus normalized converter rating"), tradeoff);
  add_common(app.add_subcommand("design", "Layer 1 placement and Layer 2 sweep"), design);
  auto* day_cmd = app.add_subcommand("day", "Single-day charging plaza trajectories");
  add_common(day_cmd, day);
  day_cmd->add_option("--kind", day_kinds, "Architecture kinds (default: all configured)");
  add_common(app.add_subcommand("ensemble", "Monte Carlo plaza ensemble and derating"), ensemble);
  add_common(app.add_subcommand("validate", "Check a scenario and print it fully resolved"), validate,
             false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("validate")) {
      std::cout << load(validate).to_json().dump(2) << "\n";
      return kOk;
    }
    if (app.got_subcommand("tradeoff")) {
      const auto s = load(tradeoff);
      report(bess::run_tradeoff(s, workers(tradeoff)), tradeoff.out);
    } else if (app.got_subcommand("design")) {
      const auto s = load(design);
      report(bess::run_design(s, workers(design)), design.out);
    } else if (app.got_subcommand("day")) {
      const auto s = load(day);
      std::vector<bess::ArchitectureKind> kinds;
      for (const auto& k : day_kinds) {
        try {
          kinds.push_back(bess::parse_kind(k));
        } catch (const std::invalid_argument& e) {
          std::cerr << "error: " << e.what() << "\n";
          return kConfigError;
        }
      }
      report(bess::run_day(s, kinds, workers(day)), day.out);
    } else if (app.got_subcommand("ensemble")) {
      const auto s = load(ensemble);
      report(bess::run_ensemble(s, workers(ensemble)), ensemble.out);
    }
  } catch (const bess::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
