#include "iab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include <json.hpp>

#include "iab/json_io.hpp"
#include "iab/optimizer.hpp"

namespace iab {

namespace {

HourlyResult evaluate_strategy(const MeasurementsGraph& g,
                               const std::vector<Commodity>& commodities,
                               StrategyKind kind, const SolveBudget& budget) {
  HourlyResult row;
  row.strategy = kind;
  row.ue_count = static_cast<int>(commodities.size());

  if (kind == StrategyKind::OptimizedTree) {
    const SolveInstanceResult solved = solve_instance(g, commodities, budget);
    row.solve_ms = solved.solve_ms;
    row.feasible = solved.status == SolveStatus::Optimal;
    if (solved.tree) {
      row.active_iab_nodes = active_count_for_energy(kind, *solved.tree, g);
      const CapacityReport report =
          capacity_report(g, *solved.tree, commodities);
      row.avg_idle_bps = report.avg_idle_bps;
      row.avg_sat_bps = report.avg_saturation_bps;
      row.min_sat_bps = report.min_saturation_bps;
    }
    return row;
  }

  StrategyResult strat;
  switch (kind) {
    case StrategyKind::AllDonors:
      strat = all_donors(g, commodities);
      break;
    case StrategyKind::NoRelays:
      strat = no_relays(g, commodities);
      break;
    default:
      strat = widest_tree(g, commodities);
      break;
  }
  row.feasible = strat.unattached.empty();
  row.active_iab_nodes = active_count_for_energy(kind, strat.tree, g);
  const CapacityReport report = capacity_report(g, strat.tree, commodities);
  row.avg_idle_bps = report.avg_idle_bps;
  row.avg_sat_bps = report.avg_saturation_bps;
  row.min_sat_bps = report.min_saturation_bps;
  return row;
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

WeekResult run_week(const RunConfig& cfg) {
  if (cfg.profile.values.size() != static_cast<std::size_t>(kHoursPerWeek)) {
    throw std::invalid_argument("load profile must cover 168 hours");
  }
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (cfg.strategies.empty()) {
    throw std::invalid_argument("no strategies selected");
  }

  // Canonical strategy order within each (run, hour) block.
  std::vector<StrategyKind> strategies = cfg.strategies;
  std::sort(strategies.begin(), strategies.end());
  strategies.erase(std::unique(strategies.begin(), strategies.end()),
                   strategies.end());

  const double demand =
      cfg.demand_bps > 0.0 ? cfg.demand_bps : cfg.scenario.min_capacity_bps;
  const GnbLayout layout = make_gnb_layout(cfg.scenario);

  WeekResult result;
  result.config_hash = config_hash(cfg.scenario);
  const std::size_t tasks =
      static_cast<std::size_t>(cfg.runs) * kHoursPerWeek;
  result.rows.resize(tasks * strategies.size());

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int n_threads =
      std::max(1, std::min<int>(cfg.threads > 0 ? cfg.threads : hw,
                                static_cast<int>(tasks)));

  std::atomic<std::size_t> next_task{0};
  auto worker = [&]() {
    for (std::size_t task = next_task.fetch_add(1); task < tasks;
         task = next_task.fetch_add(1)) {
      const int run = static_cast<int>(task) / kHoursPerWeek;
      const int hour = static_cast<int>(task) % kHoursPerWeek;
      const MeasurementsGraph g = hourly_graph(
          cfg.scenario, layout, cfg.profile.values[hour], run, hour);
      const std::vector<Commodity> commodities = commodities_for(g, demand);
      for (std::size_t s = 0; s < strategies.size(); ++s) {
        HourlyResult row =
            evaluate_strategy(g, commodities, strategies[s], cfg.budget);
        row.hour = hour;
        row.run = run;
        row.config_hash = result.config_hash;
        result.rows[task * strategies.size() + s] = std::move(row);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  // Weekly gNB-hours per strategy and run, then mean / sd across runs.
  std::map<StrategyKind, std::vector<double>> per_run_hours;
  for (StrategyKind s : strategies) {
    per_run_hours[s].assign(cfg.runs, 0.0);
  }
  for (const HourlyResult& row : result.rows) {
    per_run_hours[row.strategy][row.run] += row.active_iab_nodes;
  }
  auto mean_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / v.size();
  };
  double all_donors_mean = 0.0;
  const bool have_all_donors = per_run_hours.count(StrategyKind::AllDonors);
  if (have_all_donors) {
    all_donors_mean = mean_of(per_run_hours[StrategyKind::AllDonors]);
  }
  for (StrategyKind s : strategies) {
    const auto& hours = per_run_hours[s];
    StrategySummary summary;
    summary.strategy = s;
    summary.gnb_hours_mean = mean_of(hours);
    if (hours.size() > 1) {
      double var = 0.0;
      for (double h : hours) var += (h - summary.gnb_hours_mean) * (h - summary.gnb_hours_mean);
      summary.gnb_hours_sd = std::sqrt(var / (hours.size() - 1));
    }
    if (have_all_donors && all_donors_mean > 0.0) {
      summary.savings_vs_all_donors =
          savings_vs(summary.gnb_hours_mean, all_donors_mean);
    }
    result.summary.push_back(summary);
  }
  return result;
}

double savings_vs(double hours, double baseline_hours) {
  return 1.0 - hours / baseline_hours;
}

std::string results_csv(const WeekResult& result) {
  // solve_ms is deliberately not part of this file: results.csv must be
  // byte-identical across reruns of the same (config, seed), and wall-clock
  // timings are not. They land in timings_csv instead.
  std::string out =
      "hour,run,strategy,ue_count,active_iab_nodes,avg_idle_bps,avg_sat_bps,"
      "min_sat_bps,feasible,config_hash\n";
  for (const HourlyResult& row : result.rows) {
    out += std::to_string(row.hour) + ",";
    out += std::to_string(row.run) + ",";
    out += std::string(to_string(row.strategy)) + ",";
    out += std::to_string(row.ue_count) + ",";
    out += std::to_string(row.active_iab_nodes) + ",";
    out += format_double(row.avg_idle_bps) + ",";
    out += format_double(row.avg_sat_bps) + ",";
    out += format_double(row.min_sat_bps) + ",";
    out += std::string(row.feasible ? "1" : "0") + ",";
    out += row.config_hash + "\n";
  }
  return out;
}

std::string timings_csv(const WeekResult& result) {
  std::string out = "hour,run,strategy,solve_ms\n";
  for (const HourlyResult& row : result.rows) {
    out += std::to_string(row.hour) + "," + std::to_string(row.run) + "," +
           to_string(row.strategy) + "," + format_double(row.solve_ms) + "\n";
  }
  return out;
}

std::string summary_json(const WeekResult& result) {
  nlohmann::json strategies = nlohmann::json::array();
  for (const StrategySummary& s : result.summary) {
    strategies.push_back({{"strategy", to_string(s.strategy)},
                          {"gnb_hours_mean", s.gnb_hours_mean},
                          {"gnb_hours_sd", s.gnb_hours_sd},
                          {"savings_vs_all_donors", s.savings_vs_all_donors}});
  }
  nlohmann::json j = {{"config_hash", result.config_hash},
                      {"strategies", strategies}};
  return j.dump(2) + "\n";
}

std::string manifest_json(const RunConfig& cfg, const std::string& out_dir) {
  nlohmann::json strategies = nlohmann::json::array();
  for (StrategyKind s : cfg.strategies) strategies.push_back(to_string(s));
  nlohmann::json j = {
      {"config_hash", config_hash(cfg.scenario)},
      {"seed", cfg.scenario.seed},
      {"runs", cfg.runs},
      {"strategies", strategies},
      {"demand_bps",
       cfg.demand_bps > 0.0 ? cfg.demand_bps : cfg.scenario.min_capacity_bps},
      {"output_dir", out_dir},
      {"config", scenario_to_json(cfg.scenario)}};
  return j.dump(2) + "\n";
}

}  // namespace iab
