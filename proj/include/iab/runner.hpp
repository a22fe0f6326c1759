#pragma once

#include <string>
#include <vector>

#include "iab/metrics.hpp"
#include "iab/milp.hpp"
#include "iab/scenario.hpp"
#include "iab/strategies.hpp"

namespace iab {

struct RunConfig {
  ScenarioConfig scenario;
  LoadProfile profile;
  std::vector<StrategyKind> strategies = {
      StrategyKind::AllDonors, StrategyKind::NoRelays,
      StrategyKind::WidestTree, StrategyKind::OptimizedTree};
  int runs = 10;
  /// 0 uses scenario.min_capacity_bps.
  double demand_bps = 0.0;
  SolveBudget budget;
  /// Worker threads for the hour x run sweep; 0 picks the hardware count.
  int threads = 0;
};

/// One CSV row. `feasible` means the strategy served every UE this hour
/// (for the optimizer: the program was solved to optimality). Infeasible or
/// timed-out optimizer hours keep zero activations and metrics.
struct HourlyResult {
  int hour = 0;
  int run = 0;
  StrategyKind strategy = StrategyKind::AllDonors;
  int ue_count = 0;
  int active_iab_nodes = 0;
  double avg_idle_bps = 0.0;
  double avg_sat_bps = 0.0;
  double min_sat_bps = 0.0;
  bool feasible = false;
  double solve_ms = 0.0;
  std::string config_hash;
};

struct StrategySummary {
  StrategyKind strategy = StrategyKind::AllDonors;
  double gnb_hours_mean = 0.0;
  double gnb_hours_sd = 0.0;
  /// 1 - hours/hours(AllDonors); 0 when AllDonors was not part of the run.
  double savings_vs_all_donors = 0.0;
};

struct WeekResult {
  std::vector<HourlyResult> rows;  // sorted by (run, hour, strategy)
  std::vector<StrategySummary> summary;
  std::string config_hash;
};

/// Runs the full sweep: per (run, hour), generate the measurements graph,
/// execute each strategy and collect metrics. Hour x run tasks execute on a
/// bounded worker pool; the row order is deterministic regardless of
/// scheduling.
WeekResult run_week(const RunConfig& cfg);

/// Fractional saving of `hours` against `baseline_hours` (1 - h/b).
double savings_vs(double hours, double baseline_hours);

/// Deterministic result rows; rerunning the same (config, seed) reproduces
/// this file byte for byte. Wall-clock timings live in timings_csv.
std::string results_csv(const WeekResult& result);
std::string timings_csv(const WeekResult& result);
std::string summary_json(const WeekResult& result);
std::string manifest_json(const RunConfig& cfg, const std::string& out_dir);

}  // namespace iab
