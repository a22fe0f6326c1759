#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "iab/json_io.hpp"
#include "iab/optimizer.hpp"
#include "iab/runner.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

#ifndef IABSIM_DATA_DIR
#define IABSIM_DATA_DIR "data"
#endif

std::string default_profile_path() {
  return std::string(IABSIM_DATA_DIR) + "/default_profile.csv";
}

struct CommonOpts {
  std::string config_path;
  std::string profile_path;
  std::optional<std::uint64_t> seed;
  bool no_shadowing = false;
};

iab::ScenarioConfig load_scenario(const CommonOpts& opts) {
  iab::ScenarioConfig cfg = iab::desk_scale_defaults();
  if (!opts.config_path.empty()) {
    cfg = iab::scenario_from_json(
        json::parse(iab::read_text_file(opts.config_path)));
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.no_shadowing) cfg.channel.shadowing = false;
  return cfg;
}

iab::LoadProfile load_profile(const CommonOpts& opts) {
  const std::string path =
      opts.profile_path.empty() ? default_profile_path() : opts.profile_path;
  return iab::load_profile_csv(path);
}

iab::MeasurementsGraph load_graph(const std::string& path) {
  iab::MeasurementsGraph g =
      iab::graph_from_json(json::parse(iab::read_text_file(path)));
  if (auto violation = iab::validate(g)) {
    throw std::runtime_error("invalid graph: " + violation->rule +
                             (violation->detail.empty()
                                  ? ""
                                  : " (" + violation->detail + ")"));
  }
  return g;
}

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    iab::write_text_file(out_path, content);
  }
}

int cmd_generate(const CommonOpts& opts, const std::string& out_dir,
                 int run) {
  const iab::ScenarioConfig cfg = load_scenario(opts);
  const iab::LoadProfile profile = load_profile(opts);
  const iab::GnbLayout layout = iab::make_gnb_layout(cfg);
  fs::create_directories(out_dir);
  for (int hour = 0; hour < iab::kHoursPerWeek; ++hour) {
    const iab::MeasurementsGraph g =
        iab::hourly_graph(cfg, layout, profile.values[hour], run, hour);
    char name[32];
    std::snprintf(name, sizeof(name), "hour_%03d.json", hour);
    iab::write_text_file((fs::path(out_dir) / name).string(),
                         iab::graph_to_json(g).dump(2) + "\n");
  }
  std::cout << "wrote 168 hourly graphs to " << out_dir << "\n";
  return kExitOk;
}

int cmd_solve(const std::string& graph_path, double demand_mbps,
              double time_limit_ms, const std::string& out_path) {
  const iab::MeasurementsGraph g = load_graph(graph_path);
  const std::vector<iab::Commodity> commodities =
      iab::commodities_for(g, demand_mbps * 1e6);
  iab::SolveBudget budget;
  budget.time_limit_ms = time_limit_ms;
  const iab::SolveInstanceResult result =
      iab::solve_instance(g, commodities, budget);
  if (result.status == iab::SolveStatus::Infeasible) {
    std::cerr << "infeasible: total demand "
              << (result.diagnostic ? result.diagnostic->total_demand_mbps : 0)
              << " Mb/s, donor intake bound "
              << (result.diagnostic ? result.diagnostic->donor_intake_bound_mbps
                                    : 0)
              << " Mb/s";
    if (result.diagnostic && !result.diagnostic->isolated_ues.empty()) {
      std::cerr << ", " << result.diagnostic->isolated_ues.size()
                << " isolated UE(s)";
    }
    std::cerr << "\n";
    return kExitInfeasible;
  }
  if (result.status == iab::SolveStatus::TimedOut) {
    std::cerr << "timed out after " << result.solve_ms << " ms ("
              << result.nodes << " nodes)\n";
    return kExitInfeasible;
  }
  write_or_print(out_path,
                 iab::tree_to_json(g, *result.tree, commodities).dump(2) + "\n");
  std::cerr << "optimal: " << result.tree->active_iab_count(g)
            << " active IAB-node(s), objective " << result.objective << ", "
            << result.solve_ms << " ms\n";
  return kExitOk;
}

int cmd_baseline(const std::string& graph_path, const std::string& strategy,
                 double demand_mbps, double time_limit_ms,
                 const std::string& out_path) {
  const auto kind = iab::strategy_from_string(strategy);
  if (!kind) {
    std::cerr << "unknown strategy '" << strategy << "'\n";
    return kExitUsage;
  }
  if (*kind == iab::StrategyKind::OptimizedTree) {
    return cmd_solve(graph_path, demand_mbps, time_limit_ms, out_path);
  }
  const iab::MeasurementsGraph g = load_graph(graph_path);
  const std::vector<iab::Commodity> commodities =
      iab::commodities_for(g, demand_mbps * 1e6);
  iab::StrategyResult result;
  switch (*kind) {
    case iab::StrategyKind::AllDonors:
      result = iab::all_donors(g, commodities);
      break;
    case iab::StrategyKind::NoRelays:
      result = iab::no_relays(g, commodities);
      break;
    default:
      result = iab::widest_tree(g, commodities);
      break;
  }
  if (!result.unattached.empty()) {
    std::cerr << result.unattached.size() << " UE(s) unattached\n";
  }
  write_or_print(out_path,
                 iab::tree_to_json(g, result.tree, commodities).dump(2) + "\n");
  return kExitOk;
}

int cmd_metrics(const std::string& graph_path, const std::string& tree_path,
                double demand_mbps) {
  const iab::MeasurementsGraph g = load_graph(graph_path);
  const std::vector<iab::Commodity> commodities =
      iab::commodities_for(g, demand_mbps * 1e6);
  const iab::IabTree tree = iab::tree_from_json(
      g, json::parse(iab::read_text_file(tree_path)), commodities);
  const iab::CapacityReport report = iab::capacity_report(g, tree, commodities);
  std::cout << iab::capacity_report_to_json(report).dump(2) << "\n";
  return kExitOk;
}

int cmd_export_lp(const std::string& graph_path, double demand_mbps,
                  const std::string& out_path) {
  const iab::MeasurementsGraph g = load_graph(graph_path);
  const std::vector<iab::Commodity> commodities =
      iab::commodities_for(g, demand_mbps * 1e6);
  auto [model, layout] = iab::build_blp(g, commodities);
  write_or_print(out_path, iab::export_lp(model));
  return kExitOk;
}

int cmd_run_week(const CommonOpts& opts, const std::string& out_dir, int runs,
                 const std::vector<std::string>& strategy_names,
                 double demand_mbps, double time_limit_ms, int threads,
                 bool paper_scale) {
  iab::RunConfig run_cfg;
  run_cfg.scenario = load_scenario(opts);
  run_cfg.profile = load_profile(opts);
  run_cfg.runs = runs;
  run_cfg.demand_bps = demand_mbps > 0 ? demand_mbps * 1e6 : 0.0;
  run_cfg.budget.time_limit_ms = time_limit_ms;
  run_cfg.threads = threads;
  if (!strategy_names.empty()) {
    run_cfg.strategies.clear();
    for (const std::string& name : strategy_names) {
      const auto kind = iab::strategy_from_string(name);
      if (!kind) {
        std::cerr << "unknown strategy '" << name << "'\n";
        return kExitUsage;
      }
      run_cfg.strategies.push_back(*kind);
    }
  }

  fs::create_directories(out_dir);

  if (paper_scale) {
    // Instances beyond the bundled solver's budget are written as LP files
    // for an external solver; the optimizer strategy is skipped.
    std::erase(run_cfg.strategies, iab::StrategyKind::OptimizedTree);
    const double demand = run_cfg.demand_bps > 0
                              ? run_cfg.demand_bps
                              : run_cfg.scenario.min_capacity_bps;
    const fs::path lp_dir = fs::path(out_dir) / "lp";
    fs::create_directories(lp_dir);
    const iab::GnbLayout layout = iab::make_gnb_layout(run_cfg.scenario);
    for (int run = 0; run < run_cfg.runs; ++run) {
      for (int hour = 0; hour < iab::kHoursPerWeek; ++hour) {
        const iab::MeasurementsGraph g = iab::hourly_graph(
            run_cfg.scenario, layout, run_cfg.profile.values[hour], run, hour);
        auto [model, lp_layout] =
            iab::build_blp(g, iab::commodities_for(g, demand));
        char name[40];
        std::snprintf(name, sizeof(name), "run%02d_hour%03d.lp", run, hour);
        iab::write_text_file((lp_dir / name).string(), iab::export_lp(model));
      }
    }
    std::cout << "wrote " << run_cfg.runs * iab::kHoursPerWeek
              << " LP files to " << lp_dir.string() << "\n";
    if (run_cfg.strategies.empty()) return kExitOk;
  }
  // The manifest lands on disk before any result row.
  iab::write_text_file((fs::path(out_dir) / "manifest.json").string(),
                       iab::manifest_json(run_cfg, out_dir));
  const iab::WeekResult result = iab::run_week(run_cfg);
  iab::write_text_file((fs::path(out_dir) / "results.csv").string(),
                       iab::results_csv(result));
  iab::write_text_file((fs::path(out_dir) / "timings.csv").string(),
                       iab::timings_csv(result));
  iab::write_text_file((fs::path(out_dir) / "summary.json").string(),
                       iab::summary_json(result));

  std::cout << "strategy          gNB-hours (mean +/- sd)   savings\n";
  for (const iab::StrategySummary& s : result.summary) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-16s  %9.1f +/- %-8.1f  %5.1f%%\n",
                  to_string(s.strategy), s.gnb_hours_mean, s.gnb_hours_sd,
                  100.0 * s.savings_vs_all_donors);
    std::cout << line;
  }

  // Exit 2 when the optimizer was requested but never produced a topology
  // for any hour that actually had UEs.
  bool optimizer_ran = false, optimizer_feasible = false;
  for (const iab::HourlyResult& row : result.rows) {
    if (row.strategy == iab::StrategyKind::OptimizedTree && row.ue_count > 0) {
      optimizer_ran = true;
      optimizer_feasible |= row.feasible;
    }
  }
  if (optimizer_ran && !optimizer_feasible) {
    std::cerr << "optimizer found no feasible hour\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IAB joint routing and energy optimization testbench"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string out_path;
  std::string graph_path;
  std::string tree_path;
  std::string strategy;
  std::vector<std::string> strategies;
  double demand_mbps = 80.0;
  double time_limit_ms = 0.0;
  double week_time_limit_ms = 60000.0;
  int runs = 10;
  int run_index = 0;
  int threads = 0;
  bool paper_scale = false;

  auto add_common = [&](CLI::App* cmd, bool with_profile) {
    cmd->add_option("--config", common.config_path,
                    "Scenario config JSON (desk-scale defaults when omitted)");
    if (with_profile) {
      cmd->add_option("--profile", common.profile_path,
                      "Weekly load profile CSV (bundled profile when omitted)");
    }
    cmd->add_option("--seed", common.seed, "Override the scenario seed");
    cmd->add_flag("--no-shadowing", common.no_shadowing,
                  "Disable shadow fading draws");
  };

  CLI::App* generate =
      app.add_subcommand("generate", "Write the 168 hourly measurement graphs");
  add_common(generate, true);
  generate->add_option("--out", out_path, "Output directory")->required();
  generate->add_option("--run", run_index, "Run index for the UE redraw");

  CLI::App* solve =
      app.add_subcommand("solve", "Solve one instance to an IAB tree");
  solve->add_option("--graph", graph_path, "Measurements graph JSON")
      ->required();
  solve->add_option("--demand-mbps", demand_mbps, "Per-UE demand in Mb/s");
  solve->add_option("--time-limit-ms", time_limit_ms, "Solver time budget");
  solve->add_option("--out", out_path, "Tree JSON output (stdout if omitted)");

  CLI::App* baseline =
      app.add_subcommand("baseline", "Run a baseline strategy on one instance");
  baseline->add_option("--graph", graph_path, "Measurements graph JSON")
      ->required();
  baseline->add_option("--strategy", strategy,
                       "all-donors | no-relays | widest-tree | optimized-tree")
      ->required();
  baseline->add_option("--demand-mbps", demand_mbps, "Per-UE demand in Mb/s");
  baseline->add_option("--time-limit-ms", time_limit_ms, "Solver time budget");
  baseline->add_option("--out", out_path, "Tree JSON output (stdout if omitted)");

  CLI::App* metrics =
      app.add_subcommand("metrics", "Capacity metrics of a tree on a graph");
  metrics->add_option("--graph", graph_path, "Measurements graph JSON")
      ->required();
  metrics->add_option("--tree", tree_path, "Tree JSON")->required();
  metrics->add_option("--demand-mbps", demand_mbps, "Per-UE demand in Mb/s");

  CLI::App* export_lp =
      app.add_subcommand("export-lp", "Write the instance as a CPLEX LP file");
  export_lp->add_option("--graph", graph_path, "Measurements graph JSON")
      ->required();
  export_lp->add_option("--demand-mbps", demand_mbps, "Per-UE demand in Mb/s");
  export_lp->add_option("--out", out_path, "LP output (stdout if omitted)");

  CLI::App* run_week =
      app.add_subcommand("run-week", "Full weekly sweep with all strategies");
  add_common(run_week, true);
  run_week->add_option("--out", out_path, "Output directory")->required();
  run_week->add_option("--runs", runs, "Independent simulation runs");
  run_week->add_option("--strategy", strategies,
                       "Strategies to run (repeatable; default all four)");
  run_week->add_option("--demand-mbps", demand_mbps,
                       "Per-UE demand in Mb/s (overrides config)");
  run_week->add_option("--time-limit-ms", week_time_limit_ms,
                       "Per-hour solver time budget (default 60000)");
  run_week->add_option("--threads", threads, "Worker threads (0 = auto)");
  run_week->add_flag("--paper-scale", paper_scale,
                     "Emit per-hour LP files instead of running the bundled "
                     "solver");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(common, out_path, run_index);
    if (solve->parsed()) {
      return cmd_solve(graph_path, demand_mbps, time_limit_ms, out_path);
    }
    if (baseline->parsed()) {
      return cmd_baseline(graph_path, strategy, demand_mbps, time_limit_ms,
                          out_path);
    }
    if (metrics->parsed()) {
      return cmd_metrics(graph_path, tree_path, demand_mbps);
    }
    if (export_lp->parsed()) {
      return cmd_export_lp(graph_path, demand_mbps, out_path);
    }
    if (run_week->parsed()) {
      return cmd_run_week(common, out_path, runs, strategies, demand_mbps,
                          week_time_limit_ms, threads, paper_scale);
    }
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
