#include "iab/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "iab/scenario.hpp"

namespace iab {

CapacityReport capacity_report(const MeasurementsGraph& g, const IabTree& tree,
                               const std::vector<Commodity>& commodities) {
  CapacityReport report;

  // N_in over used tree edges only: the scheduler shares airtime among the
  // links it actually serves.
  std::map<NodeId, int> used_in;
  for (const auto& [e, users] : tree.edge_use) used_in[g.edge(e).dst] += 1;

  double idle_sum = 0.0, sat_sum = 0.0;
  double min_sat = std::numeric_limits<double>::infinity();
  std::size_t attached = 0;
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    UeCapacity ue;
    ue.ue = commodities[k].source;
    const auto& path = tree.commodity_paths.at(k);
    if (path.empty()) {
      ++report.unattached_count;
      min_sat = 0.0;
      report.per_ue.push_back(ue);
      continue;
    }
    ue.attached = true;
    double idle = std::numeric_limits<double>::infinity();
    double sat = std::numeric_limits<double>::infinity();
    for (EdgeIndex e : path) {
      const Edge& edge = g.edge(e);
      idle = std::min(idle, edge.capacity_bps);
      sat = std::min(sat, edge.capacity_bps / used_in.at(edge.dst));
    }
    ue.idle_bps = idle;
    ue.saturation_bps = sat;
    idle_sum += idle;
    sat_sum += sat;
    min_sat = std::min(min_sat, sat);
    ++attached;
    report.per_ue.push_back(ue);
  }
  if (attached > 0) {
    report.avg_idle_bps = idle_sum / attached;
    report.avg_saturation_bps = sat_sum / attached;
  }
  report.min_saturation_bps =
      report.per_ue.empty() || !std::isfinite(min_sat) ? 0.0 : min_sat;
  return report;
}

double avg_idle_capacity(const MeasurementsGraph& g, const IabTree& tree,
                         const std::vector<Commodity>& commodities) {
  return capacity_report(g, tree, commodities).avg_idle_bps;
}

double avg_saturation_capacity(const MeasurementsGraph& g, const IabTree& tree,
                               const std::vector<Commodity>& commodities) {
  return capacity_report(g, tree, commodities).avg_saturation_bps;
}

double min_saturation_capacity(const MeasurementsGraph& g, const IabTree& tree,
                               const std::vector<Commodity>& commodities) {
  return capacity_report(g, tree, commodities).min_saturation_bps;
}

int active_count_for_energy(StrategyKind kind, const IabTree& tree,
                            const MeasurementsGraph& g) {
  switch (kind) {
    case StrategyKind::AllDonors: {
      int gnbs = 0;
      for (const Node& n : g.nodes()) {
        if (n.kind != NodeKind::Ue) ++gnbs;
      }
      return gnbs;
    }
    case StrategyKind::NoRelays:
      return 1;
    case StrategyKind::WidestTree:
    case StrategyKind::OptimizedTree:
      return static_cast<int>(tree.active_iab_count(g));
  }
  return 0;
}

double gnb_hours(const EnergyReport& weekly) {
  if (weekly.active_per_hour.size() != kHoursPerWeek) {
    throw std::invalid_argument(
        "energy report must cover 168 hours, got " +
        std::to_string(weekly.active_per_hour.size()));
  }
  double total = 0.0;
  for (int count : weekly.active_per_hour) total += count;
  return total;
}

}  // namespace iab
