// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "iab/channel.hpp"
#include "iab/json_io.hpp"
#include "iab/metrics.hpp"
#include "iab/optimizer.hpp"
#include "iab/runner.hpp"
#include "iab/strategies.hpp"

using namespace iab;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok,
            const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// 1. The linearized program and the exhaustive nonlinear oracle agree on the
//    optimal active-node count for >= 200 random small instances.
void criterion_theorem_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  const int instances = 300;
  int mismatches = 0, feasible = 0;
  for (int i = 0; i < instances; ++i) {
    const auto inst = testing::random_instance(rng);
    const int oracle =
        testing::bnlp_optimal_relay_count(inst.graph, inst.commodities);
    const SolveInstanceResult solved =
        solve_instance(inst.graph, inst.commodities);
    if (oracle < 0) {
      mismatches += solved.status != SolveStatus::Infeasible;
    } else {
      ++feasible;
      mismatches +=
          solved.status != SolveStatus::Optimal ||
          static_cast<int>(solved.tree->active_iab_count(inst.graph)) != oracle;
    }
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  report(1, "BLP optimum equals the exhaustive BNLP oracle",
         mismatches == 0 && secs < 300.0,
         std::to_string(instances) + " instances (" + std::to_string(feasible) +
             " feasible), " + std::to_string(mismatches) + " mismatches, " +
             fmt(secs) + " s");
}

// 2. The linearized capacity bracket telescopes to 1/n.
void criterion_linearization_identity() {
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    double bracket = 1.0;
    for (int i = 2; i <= n; ++i) {
      bracket -= 1.0 / (static_cast<double>(i - 1) * i);
    }
    worst = std::max(worst, std::fabs(bracket - 1.0 / n));
  }
  report(2, "capacity bracket equals 1/n for n = 1..20", worst <= 1e-12,
         "max deviation " + fmt(worst));
}

struct WeeklyData {
  WeekResult result;
  int n_gnb = 0;
};

WeeklyData run_default_week() {
  RunConfig cfg;
  cfg.scenario = desk_scale_defaults();
  cfg.profile =
      load_profile_csv(std::string(IABSIM_DATA_DIR) + "/default_profile.csv");
  cfg.runs = 1;
  cfg.budget.time_limit_ms = 120000;
  WeeklyData data;
  data.n_gnb = static_cast<int>(make_gnb_layout(cfg.scenario).positions.size());
  data.result = run_week(cfg);
  return data;
}

// 3. Every feasible optimizer hour meets the 80 Mb/s per-UE floor.
void criterion_demand_guarantee(const WeeklyData& week) {
  int feasible_hours = 0, violations = 0;
  double worst = 1e18;
  for (const HourlyResult& row : week.result.rows) {
    if (row.strategy != StrategyKind::OptimizedTree) continue;
    if (!row.feasible || row.ue_count == 0) continue;
    ++feasible_hours;
    worst = std::min(worst, row.min_sat_bps);
    if (row.min_sat_bps < 8e7 - 1e-9 * 1e6) ++violations;
  }
  report(3, "feasible optimized hours deliver >= 80 Mb/s per UE",
         violations == 0 && feasible_hours > 0,
         std::to_string(feasible_hours) + " feasible busy hours, worst " +
             fmt(worst / 1e6) + " Mb/s");
}

// 4. Weekly gNB-hours are ordered and the fixed strategies land exactly;
//    the savings formula reproduces the reference totals.
void criterion_ordering(const WeeklyData& week) {
  std::map<StrategyKind, double> hours;
  for (const HourlyResult& row : week.result.rows) {
    hours[row.strategy] += row.active_iab_nodes;
  }
  const bool ordered =
      hours[StrategyKind::OptimizedTree] <= hours[StrategyKind::WidestTree] &&
      hours[StrategyKind::WidestTree] <= hours[StrategyKind::AllDonors];
  const bool exact = hours[StrategyKind::NoRelays] == 168.0 &&
                     hours[StrategyKind::AllDonors] == 168.0 * week.n_gnb;
  const double vs_all = 100.0 * savings_vs(709.0, 1344.0);
  const double vs_widest = 100.0 * savings_vs(709.0, 1141.0);
  const bool savings_ok =
      std::fabs(vs_all - 47.2) < 0.05 && std::fabs(vs_widest - 37.9) < 0.05;
  report(4, "gNB-hours ordering and reference savings",
         ordered && exact && savings_ok,
         "optimized " + fmt(hours[StrategyKind::OptimizedTree]) + " <= widest " +
             fmt(hours[StrategyKind::WidestTree]) + " <= all_donors " +
             fmt(hours[StrategyKind::AllDonors]) + ", no_relays " +
             fmt(hours[StrategyKind::NoRelays]) + ", savings " + fmt(vs_all) +
             "% / " + fmt(vs_widest) + "%");
}

// 5. Hours with no UEs put the whole IAB layer to sleep.
void criterion_nighttime_sleep(const WeeklyData& week) {
  int trough_hours = 0, awake = 0;
  for (const HourlyResult& row : week.result.rows) {
    if (row.strategy != StrategyKind::OptimizedTree || row.ue_count != 0) {
      continue;
    }
    ++trough_hours;
    awake += row.active_iab_nodes != 0;
  }
  report(5, "optimizer deactivates every IAB-node in empty hours",
         trough_hours > 0 && awake == 0,
         std::to_string(trough_hours) + " empty hours, " +
             std::to_string(awake) + " awake");
}

// 6. Capacity metrics equal an independent per-path recomputation.
void criterion_metric_oracles() {
  Rng rng(1006);
  int trees = 0, mismatches = 0;
  while (trees < 100) {
    const auto inst = testing::random_instance(rng);
    for (const StrategyResult& s :
         {all_donors(inst.graph, inst.commodities),
          no_relays(inst.graph, inst.commodities),
          widest_tree(inst.graph, inst.commodities)}) {
      const CapacityReport report_ =
          capacity_report(inst.graph, s.tree, inst.commodities);
      const testing::MetricOracle oracle =
          testing::recompute_metrics(inst.graph, s.tree, inst.commodities);
      mismatches += report_.avg_idle_bps != oracle.avg_idle ||
                    report_.avg_saturation_bps != oracle.avg_sat ||
                    report_.min_saturation_bps != oracle.min_sat;
      ++trees;
    }
  }
  report(6, "metrics match brute-force path recomputation exactly",
         mismatches == 0,
         std::to_string(trees) + " trees, " + std::to_string(mismatches) +
             " mismatches");
}

// 7. The exact solver agrees with 2^n enumeration.
void criterion_solver_oracle() {
  Rng rng(1007);
  int mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const MilpModel model = testing::random_model(rng, 18);
    const auto brute = testing::brute_force_solve(model);
    const Solution sol = solve_exact(model);
    if (!brute.feasible) {
      mismatches += sol.status != SolveStatus::Infeasible;
    } else {
      mismatches += sol.status != SolveStatus::Optimal ||
                    std::fabs(sol.objective_value - brute.objective) > 1e-9 ||
                    sol.assignment != brute.assignment;
    }
  }
  report(7, "solver equals exhaustive enumeration on 50 models",
         mismatches == 0, std::to_string(mismatches) + " mismatches");
}

// 8. Identical (config, seed) reproduces identical bytes.
void criterion_determinism() {
  const ScenarioConfig cfg = desk_scale_defaults();
  const GnbLayout layout = make_gnb_layout(cfg);
  bool graphs_equal = true;
  for (int hour : {0, 9, 13}) {
    const auto a =
        graph_to_json(hourly_graph(cfg, layout, 0.9, 0, hour)).dump();
    const auto b =
        graph_to_json(hourly_graph(cfg, layout, 0.9, 0, hour)).dump();
    graphs_equal = graphs_equal && a == b;
  }

  RunConfig run_cfg;
  run_cfg.scenario = cfg;
  run_cfg.profile =
      load_profile_csv(std::string(IABSIM_DATA_DIR) + "/default_profile.csv");
  run_cfg.runs = 1;
  run_cfg.budget.time_limit_ms = 120000;
  const std::string csv_a = results_csv(run_week(run_cfg));
  const std::string csv_b = results_csv(run_week(run_cfg));
  report(8, "byte-identical graph JSON and results CSV on rerun",
         graphs_equal && csv_a == csv_b);
}

// 9. The hand-computed 28 GHz / 100 m / LOS backhaul link budget.
void criterion_channel_sanity() {
  ChannelParams params;
  params.shadowing = false;
  const LinkGeometry geom{100.0, false, LinkClass::Backhaul};

  const double pl = pathloss_db(geom, LosState::Los, params);
  const double pl_expected =
      32.4 + 21.0 * std::log10(100.0) + 20.0 * std::log10(28.0);
  const double noise = -174.0 + 10.0 * std::log10(1e8) + 5.0;
  const double snr_db = 30.0 + 10.0 - pl_expected - noise;
  const double cap_expected =
      4.0 * 1e8 * std::log2(1.0 + std::pow(10.0, snr_db / 10.0));

  Rng rng(9);
  const double cap = link_capacity_bps(geom, LosState::Los, params, rng);
  const bool ok = std::fabs(pl - pl_expected) < 0.01 &&
                  std::fabs(cap - cap_expected) / cap_expected < 0.001;
  report(9, "28 GHz / 100 m LOS backhaul budget matches hand computation", ok,
         "pathloss " + fmt(pl) + " dB, capacity " + fmt(cap / 1e9) + " Gb/s");
}

}  // namespace

int main() {
  criterion_theorem_equivalence();
  criterion_linearization_identity();
  const WeeklyData week = run_default_week();
  criterion_demand_guarantee(week);
  criterion_ordering(week);
  criterion_nighttime_sleep(week);
  criterion_metric_oracles();
  criterion_solver_oracle();
  criterion_determinism();
  criterion_channel_sanity();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
