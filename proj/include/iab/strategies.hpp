#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "iab/graph.hpp"

namespace iab {

enum class StrategyKind : std::uint8_t {
  AllDonors,
  NoRelays,
  WidestTree,
  OptimizedTree,
};

const char* to_string(StrategyKind kind);
std::optional<StrategyKind> strategy_from_string(std::string_view name);

/// Baseline topologies may leave UEs unserved; those commodities keep an
/// empty path and are listed in `unattached`.
struct StrategyResult {
  IabTree tree;
  std::vector<NodeId> unattached;
};

/// Dense wired deployment: every gNB stays on, each UE attaches to its
/// best access link, no load balancing and no backhaul edges.
StrategyResult all_donors(const MeasurementsGraph& g,
                          const std::vector<Commodity>& commodities);

/// Only the donor is on; UEs without a direct donor link go unserved.
StrategyResult no_relays(const MeasurementsGraph& g,
                         const std::vector<Commodity>& commodities);

/// Maximum-bottleneck routing: a widest-path tree is grown from the donor
/// over the backhaul subgraph once (so gNB next-hops cannot conflict), then
/// each UE picks the access edge maximizing its end-to-end bottleneck.
/// Relays on no UE path are deactivated. Ties break toward fewer hops, then
/// the smaller node id.
StrategyResult widest_tree(const MeasurementsGraph& g,
                           const std::vector<Commodity>& commodities);

}  // namespace iab
