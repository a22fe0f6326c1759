#pragma once

#include <vector>

#include "iab/graph.hpp"
#include "iab/milp.hpp"
#include "iab/rng.hpp"

namespace iab::testing {

// Reference 4-gNB topology: donor 0, relays 1..3, UEs 4..8. Relay 2 has a
// backhaul link too weak to ever carry a commodity share, so the optimal
// tree activates exactly relays 1 and 3.
//
// Capacities in Mb/s:
//   access:   ue4->r1 300, ue5->r1 300, ue6->{r1 300, donor 200, r2 300},
//             ue7->{r2 300, donor 200, r3 250}, ue8->{r1 250, r3 250}
//   backhaul: r1->donor 700, r2->donor 90, r3->donor 420, r1<->r3 500
inline MeasurementsGraph fig_topology() {
  const double m = 1e6;
  std::vector<Node> nodes = {
      {0, NodeKind::Donor, {150, 150, 10}},  {1, NodeKind::IabNode, {60, 80, 10}},
      {2, NodeKind::IabNode, {220, 240, 10}}, {3, NodeKind::IabNode, {260, 60, 10}},
      {4, NodeKind::Ue, {20, 20, 1.5}},      {5, NodeKind::Ue, {20, 120, 1.5}},
      {6, NodeKind::Ue, {120, 200, 1.5}},    {7, NodeKind::Ue, {250, 160, 1.5}},
      {8, NodeKind::Ue, {180, 40, 1.5}},
  };
  std::vector<Edge> edges = {
      {1, 0, 700 * m}, {2, 0, 90 * m},  {3, 0, 420 * m},
      {1, 3, 500 * m}, {3, 1, 500 * m},
      {4, 1, 300 * m},
      {5, 1, 300 * m},
      {6, 1, 300 * m}, {6, 0, 200 * m}, {6, 2, 300 * m},
      {7, 2, 300 * m}, {7, 0, 200 * m}, {7, 3, 250 * m},
      {8, 1, 250 * m}, {8, 3, 250 * m},
  };
  return MeasurementsGraph(std::move(nodes), std::move(edges));
}

inline std::vector<Commodity> fig_commodities(double demand_bps = 8e7) {
  std::vector<Commodity> out;
  for (NodeId ue = 4; ue <= 8; ++ue) out.push_back({ue, 0, demand_bps});
  return out;
}

// Random well-formed instance with <= 5 gNBs and <= 6 UEs for the
// equivalence sweeps. Donor is gNB 0; capacities uniform in Mb/s.
struct RandomInstance {
  MeasurementsGraph graph;
  std::vector<Commodity> commodities;
};

inline RandomInstance random_instance(Rng& rng) {
  const int n_relay = 1 + static_cast<int>(rng.next_u64() % 4);
  const int n_gnb = 1 + n_relay;
  const int n_ue = 1 + static_cast<int>(rng.next_u64() % 6);

  std::vector<Node> nodes;
  for (int i = 0; i < n_gnb; ++i) {
    nodes.push_back({static_cast<NodeId>(i),
                     i == 0 ? NodeKind::Donor : NodeKind::IabNode,
                     {rng.uniform(0, 300), rng.uniform(0, 300), 10.0}});
  }
  for (int u = 0; u < n_ue; ++u) {
    nodes.push_back({static_cast<NodeId>(n_gnb + u), NodeKind::Ue,
                     {rng.uniform(0, 300), rng.uniform(0, 300), 1.5}});
  }

  const double m = 1e6;
  std::vector<Edge> edges;
  for (NodeId i = 1; i < static_cast<NodeId>(n_gnb); ++i) {
    if (rng.uniform() < 0.8) {
      edges.push_back({i, 0, rng.uniform(60, 500) * m});
    }
    for (NodeId j = i + 1; j < static_cast<NodeId>(n_gnb); ++j) {
      if (rng.uniform() < 0.7) {
        const double cap = rng.uniform(60, 500) * m;
        edges.push_back({i, j, cap});
        edges.push_back({j, i, cap});
      }
    }
  }
  for (NodeId u = 0; u < static_cast<NodeId>(n_ue); ++u) {
    const NodeId ue = static_cast<NodeId>(n_gnb) + u;
    for (NodeId g = 0; g < static_cast<NodeId>(n_gnb); ++g) {
      if (rng.uniform() < 0.6) {
        edges.push_back({ue, g, rng.uniform(40, 400) * m});
      }
    }
  }

  RandomInstance inst{MeasurementsGraph(std::move(nodes), std::move(edges)),
                      {}};
  const double demands[] = {4e7, 8e7, 1.2e8};
  for (int u = 0; u < n_ue; ++u) {
    inst.commodities.push_back({static_cast<NodeId>(n_gnb + u), 0,
                                demands[rng.next_u64() % 3]});
  }
  return inst;
}

// Random binary program small enough for exhaustive enumeration.
inline MilpModel random_model(Rng& rng, int max_vars = 18) {
  MilpModel model;
  const int n = 2 + static_cast<int>(rng.next_u64() % (max_vars - 1));
  for (int v = 0; v < n; ++v) {
    const auto var = model.add_variable("v" + std::to_string(v));
    model.set_objective(var, std::floor(rng.uniform(-3, 4)));
  }
  const int rows = 1 + static_cast<int>(rng.next_u64() % (2 * n));
  for (int r = 0; r < rows; ++r) {
    std::vector<LinearTerm> terms;
    for (int v = 0; v < n; ++v) {
      if (rng.uniform() < 0.4) {
        terms.push_back({static_cast<std::uint32_t>(v),
                         std::floor(rng.uniform(-5, 6))});
      }
    }
    if (terms.empty()) continue;
    const double pick = rng.uniform();
    const Relation rel = pick < 0.6   ? Relation::Le
                         : pick < 0.9 ? Relation::Ge
                                      : Relation::Eq;
    model.add_constraint(std::move(terms), rel, std::floor(rng.uniform(-4, 8)));
  }
  return model;
}

}  // namespace iab::testing
