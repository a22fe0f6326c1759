#include "iab/strategies.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

namespace iab {

const char* to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::AllDonors:
      return "all_donors";
    case StrategyKind::NoRelays:
      return "no_relays";
    case StrategyKind::WidestTree:
      return "widest_tree";
    case StrategyKind::OptimizedTree:
      return "optimized_tree";
  }
  return "unknown";
}

std::optional<StrategyKind> strategy_from_string(std::string_view name) {
  if (name == "all_donors" || name == "all-donors") {
    return StrategyKind::AllDonors;
  }
  if (name == "no_relays" || name == "no-relays") return StrategyKind::NoRelays;
  if (name == "widest_tree" || name == "widest-tree") {
    return StrategyKind::WidestTree;
  }
  if (name == "optimized_tree" || name == "optimized-tree") {
    return StrategyKind::OptimizedTree;
  }
  return std::nullopt;
}

namespace {

// Assembles tree bookkeeping (parent, active, edge_use) from already-chosen
// commodity paths.
StrategyResult finish(const MeasurementsGraph& g,
                      const std::vector<Commodity>& commodities,
                      std::vector<std::vector<EdgeIndex>> paths) {
  StrategyResult result;
  result.tree.commodity_paths = std::move(paths);
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    if (result.tree.commodity_paths[k].empty()) {
      result.unattached.push_back(commodities[k].source);
      continue;
    }
    for (EdgeIndex e : result.tree.commodity_paths[k]) {
      result.tree.edge_use[e].push_back(k);
      result.tree.parent.emplace(g.edge(e).src, g.edge(e).dst);
      result.tree.active.insert(g.edge(e).src);
      result.tree.active.insert(g.edge(e).dst);
    }
  }
  result.tree.active.insert(g.donor());
  return result;
}

// Best access edge of `ue` by capacity; ties go to the smaller gNB id
// (edges are stored in increasing gNB order, so strict > keeps the first).
std::optional<EdgeIndex> best_access_edge(const MeasurementsGraph& g,
                                          NodeId ue) {
  std::optional<EdgeIndex> best;
  double best_cap = 0.0;
  for (EdgeIndex e : g.out_edges(ue)) {
    if (!best || g.edge(e).capacity_bps > best_cap) {
      best = e;
      best_cap = g.edge(e).capacity_bps;
    }
  }
  return best;
}

}  // namespace

StrategyResult all_donors(const MeasurementsGraph& g,
                          const std::vector<Commodity>& commodities) {
  std::vector<std::vector<EdgeIndex>> paths(commodities.size());
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    if (auto e = best_access_edge(g, commodities[k].source)) {
      paths[k] = {*e};
    }
  }
  return finish(g, commodities, std::move(paths));
}

StrategyResult no_relays(const MeasurementsGraph& g,
                         const std::vector<Commodity>& commodities) {
  const NodeId donor = g.donor();
  std::vector<std::vector<EdgeIndex>> paths(commodities.size());
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    if (auto e = g.find_edge(commodities[k].source, donor)) {
      paths[k] = {*e};
    }
  }
  return finish(g, commodities, std::move(paths));
}

StrategyResult widest_tree(const MeasurementsGraph& g,
                           const std::vector<Commodity>& commodities) {
  const NodeId donor = g.donor();
  const double inf = std::numeric_limits<double>::infinity();

  // Widest-path tree over the backhaul subgraph, rooted at the donor:
  // bottleneck[v] is the best min-capacity from gNB v to the donor,
  // next_edge[v] the first hop achieving it. Computing next hops once per
  // instance keeps gNB out-degrees at one by construction.
  std::vector<double> bottleneck(g.node_count(), 0.0);
  std::vector<int> hops(g.node_count(), 0);
  std::vector<std::optional<EdgeIndex>> next_edge(g.node_count());
  bottleneck[donor] = inf;

  using Entry = std::tuple<double, int, NodeId>;  // (-bn, hops, id) min-heap
  auto cmp = [](const Entry& a, const Entry& b) { return a > b; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  heap.push({-inf, 0, donor});
  std::vector<std::uint8_t> done(g.node_count(), 0);

  while (!heap.empty()) {
    const auto [neg_bn, h, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (EdgeIndex in_e : g.in_edges(v)) {
      const NodeId u = g.edge(in_e).src;
      if (g.node(u).kind != NodeKind::IabNode || done[u]) continue;
      const double bn = std::min(g.edge(in_e).capacity_bps, -neg_bn);
      const int uh = h + 1;
      if (bn > bottleneck[u] ||
          (bn == bottleneck[u] && next_edge[u] && uh < hops[u])) {
        bottleneck[u] = bn;
        hops[u] = uh;
        next_edge[u] = in_e;
        heap.push({-bn, uh, u});
      }
    }
  }

  // Each UE picks the access edge with the widest end-to-end bottleneck.
  std::vector<std::vector<EdgeIndex>> paths(commodities.size());
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    std::optional<EdgeIndex> best;
    double best_bn = 0.0;
    int best_hops = 0;
    for (EdgeIndex e : g.out_edges(commodities[k].source)) {
      const NodeId gnb = g.edge(e).dst;
      if (bottleneck[gnb] <= 0.0) continue;  // gNB cannot reach the donor
      const double bn = std::min(g.edge(e).capacity_bps, bottleneck[gnb]);
      const int h = 1 + (gnb == donor ? 0 : hops[gnb]);
      if (!best || bn > best_bn || (bn == best_bn && h < best_hops)) {
        best = e;
        best_bn = bn;
        best_hops = h;
      }
    }
    if (!best) continue;
    paths[k].push_back(*best);
    NodeId at = g.edge(*best).dst;
    while (at != donor) {
      paths[k].push_back(*next_edge[at]);
      at = g.edge(*next_edge[at]).dst;
    }
  }
  return finish(g, commodities, std::move(paths));
}

}  // namespace iab
