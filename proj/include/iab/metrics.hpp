#pragma once

#include <cstdint>
#include <vector>

#include "iab/graph.hpp"
#include "iab/strategies.hpp"

namespace iab {

struct UeCapacity {
  NodeId ue = 0;
  bool attached = false;
  double idle_bps = 0.0;
  double saturation_bps = 0.0;
};

/// Idle capacity is the per-UE path bottleneck with the network to itself;
/// saturation capacity divides each edge by the used inbound degree of its
/// head first, modeling every UE transmitting at once. Unattached UEs are
/// excluded from the averages, counted, and pull the minimum to zero.
struct CapacityReport {
  double avg_idle_bps = 0.0;
  double avg_saturation_bps = 0.0;
  double min_saturation_bps = 0.0;
  std::vector<UeCapacity> per_ue;
  std::size_t unattached_count = 0;
};

CapacityReport capacity_report(const MeasurementsGraph& g, const IabTree& tree,
                               const std::vector<Commodity>& commodities);

double avg_idle_capacity(const MeasurementsGraph& g, const IabTree& tree,
                         const std::vector<Commodity>& commodities);
double avg_saturation_capacity(const MeasurementsGraph& g, const IabTree& tree,
                               const std::vector<Commodity>& commodities);
double min_saturation_capacity(const MeasurementsGraph& g, const IabTree& tree,
                               const std::vector<Commodity>& commodities);

/// Hourly activation counts of one strategy over one simulated week.
struct EnergyReport {
  std::vector<int> active_per_hour;
};

/// Energy accounting per strategy: the wired AllDonors deployment bills
/// every gNB, NoRelays bills the always-on donor, and the IAB strategies
/// bill active IAB-nodes only (the donor is not counted).
int active_count_for_energy(StrategyKind kind, const IabTree& tree,
                            const MeasurementsGraph& g);

/// Sum of hourly activation counts. Throws std::invalid_argument unless the
/// report covers exactly 168 hours.
double gnb_hours(const EnergyReport& weekly);

}  // namespace iab
