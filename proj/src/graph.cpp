#include "iab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace iab {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.src) + " -> " + std::to_string(e.dst) + ")";
}

}  // namespace

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Ue:
      return "ue";
    case NodeKind::IabNode:
      return "iab_node";
    case NodeKind::Donor:
      return "donor";
  }
  return "unknown";
}

double distance_3d(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double distance_2d(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

MeasurementsGraph::MeasurementsGraph(std::vector<Node> nodes,
                                     std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != i) {
      throw std::invalid_argument("node ids must be dense and in order, got " +
                                  std::to_string(nodes_[i].id) + " at index " +
                                  std::to_string(i));
    }
  }
  in_edges_.resize(nodes_.size());
  out_edges_.resize(nodes_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.src >= nodes_.size() || edge.dst >= nodes_.size()) {
      throw std::invalid_argument("edge " + edge_str(edge) +
                                  " references unknown node");
    }
    out_edges_[edge.src].push_back(static_cast<EdgeIndex>(e));
    in_edges_[edge.dst].push_back(static_cast<EdgeIndex>(e));
  }
}

void MeasurementsGraph::check_id(NodeId v) const {
  if (v >= nodes_.size()) {
    throw std::invalid_argument("unknown node id " + std::to_string(v));
  }
}

const Node& MeasurementsGraph::node(NodeId v) const {
  check_id(v);
  return nodes_[v];
}

const Edge& MeasurementsGraph::edge(EdgeIndex e) const {
  if (e >= edges_.size()) {
    throw std::invalid_argument("unknown edge index " + std::to_string(e));
  }
  return edges_[e];
}

const std::vector<EdgeIndex>& MeasurementsGraph::in_edges(NodeId v) const {
  check_id(v);
  return in_edges_[v];
}

const std::vector<EdgeIndex>& MeasurementsGraph::out_edges(NodeId v) const {
  check_id(v);
  return out_edges_[v];
}

std::set<NodeId> MeasurementsGraph::inner_neighbors(NodeId v) const {
  check_id(v);
  std::set<NodeId> result;
  for (EdgeIndex e : in_edges_[v]) result.insert(edges_[e].src);
  return result;
}

std::optional<EdgeIndex> MeasurementsGraph::find_edge(NodeId src,
                                                      NodeId dst) const {
  check_id(src);
  check_id(dst);
  for (EdgeIndex e : out_edges_[src]) {
    if (edges_[e].dst == dst) return e;
  }
  return std::nullopt;
}

NodeId MeasurementsGraph::donor() const {
  std::optional<NodeId> found;
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::Donor) {
      if (found) throw std::logic_error("graph has more than one donor");
      found = n.id;
    }
  }
  if (!found) throw std::logic_error("graph has no donor");
  return *found;
}

std::vector<NodeId> MeasurementsGraph::ues() const {
  std::vector<NodeId> result;
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::Ue) result.push_back(n.id);
  }
  return result;
}

std::optional<Violation> validate(const MeasurementsGraph& g) {
  std::size_t donor_count = 0;
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::Donor) ++donor_count;
  }
  if (donor_count != 1) {
    return Violation{"exactly one donor",
                     "graph has " + std::to_string(donor_count) + " donors"};
  }

  std::unordered_set<std::uint64_t> seen;
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) {
      return Violation{"no self-loops", "edge " + edge_str(e)};
    }
    if (!(e.capacity_bps > 0.0)) {
      return Violation{"capacities strictly positive", "edge " + edge_str(e)};
    }
    const std::uint64_t key =
        (static_cast<std::uint64_t>(e.src) << 32) | e.dst;
    if (!seen.insert(key).second) {
      return Violation{"no duplicate edges", "edge " + edge_str(e)};
    }
    const NodeKind src_kind = g.node(e.src).kind;
    const NodeKind dst_kind = g.node(e.dst).kind;
    if (dst_kind == NodeKind::Ue) {
      return Violation{"no edges into UEs", "edge " + edge_str(e)};
    }
    if (src_kind == NodeKind::Donor) {
      return Violation{"donor must be sink", "edge " + edge_str(e)};
    }
    // src is now UE or IabNode, dst is IabNode or Donor: access links
    // (UE -> gNB) and backhaul links (relay -> relay/donor) are both fine.
  }

  // Relay pairs carry one link per direction.
  for (const Edge& e : g.edges()) {
    if (g.node(e.src).kind == NodeKind::IabNode &&
        g.node(e.dst).kind == NodeKind::IabNode) {
      if (!g.find_edge(e.dst, e.src)) {
        return Violation{"missing reverse backhaul edge", "edge " + edge_str(e)};
      }
    }
  }
  return std::nullopt;
}

std::size_t IabTree::active_iab_count(const MeasurementsGraph& g) const {
  std::size_t count = 0;
  for (NodeId v : active) {
    if (g.node(v).kind == NodeKind::IabNode) ++count;
  }
  return count;
}

namespace {

std::string commodity_str(std::size_t index, const Commodity& k) {
  return "commodity " + std::to_string(index) + " (ue " +
         std::to_string(k.source) + ")";
}

}  // namespace

std::optional<Violation> tree_check(const MeasurementsGraph& g,
                                    const IabTree& tree,
                                    const std::vector<Commodity>& commodities,
                                    TreeCheckMode mode) {
  if (tree.commodity_paths.size() != commodities.size()) {
    return Violation{"one path per commodity",
                     "got " + std::to_string(tree.commodity_paths.size()) +
                         " paths for " + std::to_string(commodities.size()) +
                         " commodities"};
  }
  const NodeId donor = g.donor();

  // Path validity doubles as per-commodity flow conservation: each path
  // starts at its source, chains consecutively, stays simple and sinks at
  // the donor, so every intermediate node is balanced.
  std::set<EdgeIndex> used;
  std::map<EdgeIndex, std::vector<std::size_t>> expected_use;
  for (std::size_t i = 0; i < commodities.size(); ++i) {
    const Commodity& k = commodities[i];
    const auto& path = tree.commodity_paths[i];
    if (path.empty()) {
      if (mode == TreeCheckMode::Full) {
        return Violation{"every commodity routed",
                         commodity_str(i, k) + " has no path"};
      }
      continue;
    }
    std::set<NodeId> visited;
    NodeId at = k.source;
    for (EdgeIndex e : path) {
      const Edge& edge = g.edge(e);
      if (edge.src != at) {
        return Violation{"path edges must chain from the source",
                         commodity_str(i, k) + " jumps at edge (" +
                             std::to_string(edge.src) + " -> " +
                             std::to_string(edge.dst) + ")"};
      }
      if (!visited.insert(at).second) {
        return Violation{"paths must be simple",
                         commodity_str(i, k) + " revisits node " +
                             std::to_string(at)};
      }
      at = edge.dst;
      used.insert(e);
      expected_use[e].push_back(i);
    }
    if (at != donor) {
      return Violation{"paths must end at the donor",
                       commodity_str(i, k) + " ends at node " +
                           std::to_string(at)};
    }
  }

  if (expected_use != tree.edge_use) {
    return Violation{"edge_use must match commodity paths", ""};
  }

  // Out-degree <= 1 over used edges.
  std::map<NodeId, EdgeIndex> out_used;
  std::set<NodeId> incident;
  for (EdgeIndex e : used) {
    const Edge& edge = g.edge(e);
    auto [it, inserted] = out_used.emplace(edge.src, e);
    if (!inserted && it->second != e) {
      return Violation{"out-degree at most 1",
                       "node " + std::to_string(edge.src) +
                           " has two outgoing used edges"};
    }
    incident.insert(edge.src);
    incident.insert(edge.dst);
  }

  // Active set: incident to a used edge, or the donor.
  std::set<NodeId> expected_active = incident;
  expected_active.insert(donor);
  if (expected_active != tree.active) {
    return Violation{"active set must be used-edge incidence plus donor", ""};
  }

  // Parent map covers exactly the active non-donor nodes and agrees with the
  // used out-edges; following parents must reach the donor without cycles.
  for (NodeId v : tree.active) {
    if (v == donor) continue;
    auto it = tree.parent.find(v);
    if (it == tree.parent.end()) {
      return Violation{"parent defined for active non-donor nodes",
                       "node " + std::to_string(v)};
    }
    auto out_it = out_used.find(v);
    if (out_it == out_used.end() || g.edge(out_it->second).dst != it->second) {
      return Violation{"parent must follow the used out-edge",
                       "node " + std::to_string(v)};
    }
  }
  if (tree.parent.size() != tree.active.size() - tree.active.count(donor)) {
    return Violation{"parent map must not name inactive nodes", ""};
  }
  for (NodeId v : tree.active) {
    NodeId at = v;
    std::size_t hops = 0;
    while (at != donor) {
      auto it = tree.parent.find(at);
      if (it == tree.parent.end() || ++hops > g.node_count()) {
        return Violation{"every active node must reach the donor",
                         "node " + std::to_string(v)};
      }
      at = it->second;
    }
  }

  if (mode == TreeCheckMode::Full) {
    // Shared-capacity feasibility: each used edge (u,v) gets a 1/N_in(v)
    // share of v's scheduler, N_in counted over used edges only.
    std::map<NodeId, int> n_in;
    for (EdgeIndex e : used) n_in[g.edge(e).dst] += 1;
    for (const auto& [e, users] : tree.edge_use) {
      const Edge& edge = g.edge(e);
      double load_mbps = 0.0;
      for (std::size_t i : users) load_mbps += commodities[i].demand_bps / kBpsPerMbps;
      const double share_mbps =
          edge.capacity_bps / kBpsPerMbps / n_in.at(edge.dst);
      if (load_mbps > share_mbps + kCapacityTolMbps) {
        return Violation{"demand exceeds shared edge capacity",
                         "edge (" + std::to_string(edge.src) + " -> " +
                             std::to_string(edge.dst) + ") carries " +
                             std::to_string(load_mbps) + " Mb/s, share is " +
                             std::to_string(share_mbps) + " Mb/s"};
      }
    }
  }
  return std::nullopt;
}

}  // namespace iab
