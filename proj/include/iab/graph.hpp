#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace iab {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint32_t;

enum class NodeKind : std::uint8_t { Ue, IabNode, Donor };

const char* to_string(NodeKind kind);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance_3d(const Vec3& a, const Vec3& b);
double distance_2d(const Vec3& a, const Vec3& b);

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Ue;
  Vec3 pos;
};

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double capacity_bps = 0.0;
};

/// A routing request: `demand_bps` to be carried from a UE to the donor over
/// a single path.
struct Commodity {
  NodeId source = 0;
  NodeId destination = 0;
  double demand_bps = 0.0;
};

/// First violated rule of a structural or feasibility check, with the
/// offending node/edge spelled out. Checks return std::nullopt when clean.
struct Violation {
  std::string rule;
  std::string detail;
};

/// Directed weighted graph of every potentially usable wireless link.
/// Immutable after construction; structural invariants (donor is a sink,
/// backhaul links come in pairs, ...) are checked by validate(), not by the
/// constructor, so that tests can build deliberately broken graphs.
class MeasurementsGraph {
 public:
  MeasurementsGraph() = default;
  /// Throws std::invalid_argument if node ids are not dense [0, n) in order
  /// or an edge references an unknown node.
  MeasurementsGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Throws std::invalid_argument on unknown id.
  const Node& node(NodeId v) const;
  const Edge& edge(EdgeIndex e) const;

  /// Edge indices entering / leaving v, in edge insertion order.
  const std::vector<EdgeIndex>& in_edges(NodeId v) const;
  const std::vector<EdgeIndex>& out_edges(NodeId v) const;

  std::size_t in_degree(NodeId v) const { return in_edges(v).size(); }
  std::size_t out_degree(NodeId v) const { return out_edges(v).size(); }

  /// {u : (u,v) in E}. Throws std::invalid_argument on unknown id.
  std::set<NodeId> inner_neighbors(NodeId v) const;

  std::optional<EdgeIndex> find_edge(NodeId src, NodeId dst) const;

  /// The unique donor node. Throws std::logic_error if the graph does not
  /// have exactly one donor (validate() reports that case non-throwing).
  NodeId donor() const;

  /// UE node ids in increasing order.
  std::vector<NodeId> ues() const;

 private:
  void check_id(NodeId v) const;

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeIndex>> in_edges_;
  std::vector<std::vector<EdgeIndex>> out_edges_;
};

/// Checks every MeasurementsGraph invariant; returns the first violation.
std::optional<Violation> validate(const MeasurementsGraph& g);

/// Solved topology. `commodity_paths[i]` is the edge sequence routing
/// commodities[i]; an empty path marks an unattached UE (baselines only).
struct IabTree {
  std::map<NodeId, NodeId> parent;
  std::set<NodeId> active;
  std::vector<std::vector<EdgeIndex>> commodity_paths;
  std::map<EdgeIndex, std::vector<std::size_t>> edge_use;

  std::size_t active_iab_count(const MeasurementsGraph& g) const;
};

enum class TreeCheckMode : std::uint8_t {
  /// Tree shape only: out-degree <= 1, simple donor-terminated paths,
  /// consistent parent/active/edge_use. Unattached commodities tolerated.
  Structure,
  /// Structure plus flow conservation per commodity and the shared-capacity
  /// feasibility rule (every commodity routed, demands fit c/N_in).
  Full,
};

std::optional<Violation> tree_check(const MeasurementsGraph& g,
                                    const IabTree& tree,
                                    const std::vector<Commodity>& commodities,
                                    TreeCheckMode mode = TreeCheckMode::Full);

/// Feasibility slack used when comparing demand sums against shared edge
/// capacity, in Mb/s (the unit the optimizer model is scaled to).
inline constexpr double kCapacityTolMbps = 1e-9;

inline constexpr double kBpsPerMbps = 1e6;

}  // namespace iab
