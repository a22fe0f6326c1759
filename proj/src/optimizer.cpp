#include "iab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iab {

namespace {

std::string edge_tag(const MeasurementsGraph& g, EdgeIndex e) {
  return std::to_string(g.edge(e).src) + "_" + std::to_string(g.edge(e).dst);
}

bool commodity_may_use(const MeasurementsGraph& g, const Commodity& k,
                       EdgeIndex e) {
  // An edge below the demand can never serve the commodity: its round-robin
  // share is at most the raw capacity. Dropping those flow variables up
  // front keeps the search on edges that could actually appear in a tree.
  if (g.edge(e).capacity_bps < k.demand_bps) return false;
  const NodeId src = g.edge(e).src;
  return g.node(src).kind != NodeKind::Ue || src == k.source;
}

}  // namespace

std::pair<MilpModel, VariableLayout> build_blp(
    const MeasurementsGraph& g, const std::vector<Commodity>& commodities) {
  MilpModel model;
  VariableLayout layout;
  const std::size_t n_edges = g.edge_count();
  const NodeId donor = g.donor();

  // Variables, in branching order: edge indicators first (the topology
  // choice, where pruning bites), then per-commodity flows, then the
  // inbound-count thresholds that carry the objective.
  layout.edge_vars.resize(n_edges);
  for (EdgeIndex e = 0; e < n_edges; ++e) {
    layout.edge_vars[e] = model.add_variable("f_" + edge_tag(g, e));
  }
  layout.commodity_edge_vars.resize(commodities.size());
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    for (EdgeIndex e = 0; e < n_edges; ++e) {
      if (!commodity_may_use(g, commodities[k], e)) continue;
      const std::uint32_t var =
          model.add_variable("fk" + std::to_string(k) + "_" + edge_tag(g, e));
      layout.commodity_edge_vars[k].push_back({e, var});
    }
  }
  layout.count_vars.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::size_t in_v = g.in_degree(v);
    for (std::size_t i = 1; i <= in_v; ++i) {
      const std::uint32_t var = model.add_variable(
          "x" + std::to_string(v) + "_" + std::to_string(i));
      layout.count_vars[v].push_back(var);
    }
  }

  // Objective: the threshold indicators sum to the used-edge count, and the
  // exactness rows below force that equality on every solution, so the
  // minimized Sum_v Sum_i x_i(v) is emitted on the edge indicators. The
  // edge form is what lets a propagation-only solver charge each routed
  // commodity for its edges while they are still being chosen.
  for (EdgeIndex e = 0; e < n_edges; ++e) {
    model.set_objective(layout.edge_vars[e], 1.0);
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.in_degree(v) == 0) continue;
    std::vector<LinearTerm> exact;
    for (std::uint32_t x : layout.count_vars[v]) exact.push_back({x, 1.0});
    for (EdgeIndex e : g.in_edges(v)) {
      exact.push_back({layout.edge_vars[e], -1.0});
    }
    model.add_constraint(std::move(exact), Relation::Eq, 0.0,
                         "xct_n" + std::to_string(v));
  }

  // Flow conservation. The source emits one unit, the donor absorbs one,
  // and every other gNB is balanced; UEs other than the source have no
  // variables on their edges, so their balance is vacuous.
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    const Commodity& com = commodities[k];
    const std::string tag = "k" + std::to_string(k);
    std::vector<std::vector<LinearTerm>> balance(g.node_count());
    for (const auto& [e, var] : layout.commodity_edge_vars[k]) {
      balance[g.edge(e).src].push_back({var, 1.0});
      balance[g.edge(e).dst].push_back({var, -1.0});
    }
    model.add_constraint(std::move(balance[com.source]), Relation::Eq, 1.0,
                         "src_" + tag);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (v == com.source || v == donor) continue;
      if (g.node(v).kind == NodeKind::Ue) continue;
      model.add_constraint(std::move(balance[v]), Relation::Eq, 0.0,
                           "bal_" + tag + "_n" + std::to_string(v));
    }
    std::vector<LinearTerm> into_donor = std::move(balance[donor]);
    for (LinearTerm& t : into_donor) t.coeff = -t.coeff;
    model.add_constraint(std::move(into_donor), Relation::Eq, 1.0,
                         "dst_" + tag);
  }

  // Linearized shared capacity per edge (u,v): the aggregate demand routed
  // on the edge fits the 1/n round-robin share of v's scheduler, where the
  // bracket x_1(v) - sum_{i>=2} x_i(v)/((i-1)i) telescopes to 1/n when n
  // inbound edges are used.
  for (EdgeIndex e = 0; e < n_edges; ++e) {
    const Edge& edge = g.edge(e);
    const double cap_mbps = edge.capacity_bps / kBpsPerMbps;
    std::vector<LinearTerm> terms;
    for (std::size_t k = 0; k < commodities.size(); ++k) {
      const auto& vars = layout.commodity_edge_vars[k];
      const auto it = std::lower_bound(
          vars.begin(), vars.end(), e,
          [](const auto& p, EdgeIndex idx) { return p.first < idx; });
      if (it != vars.end() && it->first == e) {
        terms.push_back({it->second, commodities[k].demand_bps / kBpsPerMbps});
      }
    }
    const auto& x = layout.count_vars[edge.dst];
    terms.push_back({x[0], -cap_mbps});
    for (std::size_t i = 2; i <= x.size(); ++i) {
      terms.push_back(
          {x[i - 1], cap_mbps / (static_cast<double>(i - 1) * i)});
    }
    model.add_constraint(std::move(terms), Relation::Le, 0.0,
                         "cap_" + edge_tag(g, e));
  }

  // Edge aggregation: f(u,v) >= f_k(u,v). On access edges the converse
  // also holds in every feasible assignment: the source's single used
  // out-edge must carry each of its commodities (out-degree is capped at
  // one and the commodity has to leave). The equality lets a topology
  // decision push demand into the capacity rows immediately.
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    for (const auto& [e, var] : layout.commodity_edge_vars[k]) {
      model.add_constraint(
          {{var, 1.0}, {layout.edge_vars[e], -1.0}}, Relation::Le, 0.0,
          "agg_k" + std::to_string(k) + "_" + edge_tag(g, e));
      if (g.edge(e).src == commodities[k].source) {
        model.add_constraint(
            {{layout.edge_vars[e], 1.0}, {var, -1.0}}, Relation::Le, 0.0,
            "pin_k" + std::to_string(k) + "_" + edge_tag(g, e));
      }
    }
  }

  // Edges no commodity can use never improve a solution; pin them off so
  // the root propagation removes them from the search. For usable edges,
  // pre-compute the inbound count at which the round-robin share drops
  // below the cheapest demand the edge could carry: a used edge and that
  // threshold indicator are mutually exclusive. These conflict pairs let
  // the search cap a node's inbound degree long before the per-commodity
  // flows are placed.
  {
    std::vector<double> min_demand(n_edges, 0.0);
    for (std::size_t k = 0; k < commodities.size(); ++k) {
      for (const auto& [e, var] : layout.commodity_edge_vars[k]) {
        const double d = commodities[k].demand_bps / kBpsPerMbps;
        min_demand[e] = min_demand[e] == 0.0 ? d : std::min(min_demand[e], d);
      }
    }
    for (EdgeIndex e = 0; e < n_edges; ++e) {
      if (min_demand[e] == 0.0) {
        model.add_constraint({{layout.edge_vars[e], 1.0}}, Relation::Le, 0.0,
                             "off_" + edge_tag(g, e));
        continue;
      }
      const Edge& edge = g.edge(e);
      const double cap_mbps = edge.capacity_bps / kBpsPerMbps;
      const auto share_limit = static_cast<std::size_t>(
          std::floor(cap_mbps / min_demand[e] + kCapacityTolMbps));
      const std::size_t threshold = share_limit + 1;
      if (threshold <= layout.count_vars[edge.dst].size()) {
        model.add_constraint(
            {{layout.edge_vars[e], 1.0},
             {layout.count_vars[edge.dst][threshold - 1], 1.0}},
            Relation::Le, 1.0, "shr_" + edge_tag(g, e));
      }
    }
  }

  // Out-degree at most one over used edges makes the result a tree.
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.out_degree(v) == 0) continue;
    std::vector<LinearTerm> terms;
    for (EdgeIndex e : g.out_edges(v)) terms.push_back({layout.edge_vars[e], 1.0});
    model.add_constraint(std::move(terms), Relation::Le, 1.0,
                         "deg_n" + std::to_string(v));
  }

  // Tightening rows implied by conservation plus aggregation; they do not
  // change the optimum but let edge-level branching fail early instead of
  // rediscovering the same dead ends once per commodity.
  if (!commodities.empty()) {
    // Every source keeps one used access edge, the donor a used inbound one.
    std::set<NodeId> sources;
    for (const Commodity& k : commodities) sources.insert(k.source);
    for (NodeId u : sources) {
      std::vector<LinearTerm> terms;
      for (EdgeIndex e : g.out_edges(u)) terms.push_back({layout.edge_vars[e], 1.0});
      model.add_constraint(std::move(terms), Relation::Ge, 1.0,
                           "att_n" + std::to_string(u));
    }
    std::vector<LinearTerm> terms;
    for (EdgeIndex e : g.in_edges(donor)) {
      terms.push_back({layout.edge_vars[e], 1.0});
    }
    model.add_constraint(std::move(terms), Relation::Ge, 1.0, "att_donor");

    // Donor cut: the whole demand crosses the donor's scheduler, and with
    // n used inbound edges the intake tops out at the mean used capacity,
    // so D * n <= sum of used inbound capacities. Refutes under-provisioned
    // topologies without touching per-commodity flows.
    double total_demand_mbps = 0.0;
    for (const Commodity& k : commodities) {
      total_demand_mbps += k.demand_bps / kBpsPerMbps;
    }
    std::vector<LinearTerm> cut;
    for (std::uint32_t x : layout.count_vars[donor]) {
      cut.push_back({x, total_demand_mbps});
    }
    for (EdgeIndex e : g.in_edges(donor)) {
      cut.push_back({layout.edge_vars[e], -g.edge(e).capacity_bps / kBpsPerMbps});
    }
    model.add_constraint(std::move(cut), Relation::Le, 0.0, "cut_donor");

    // Flow continuation: a used edge into a relay forces a used edge out of
    // it (whatever enters a relay must move on toward the donor).
    for (NodeId r = 0; r < g.node_count(); ++r) {
      if (g.node(r).kind != NodeKind::IabNode) continue;
      for (EdgeIndex e : g.in_edges(r)) {
        std::vector<LinearTerm> cont{{layout.edge_vars[e], 1.0}};
        for (EdgeIndex out : g.out_edges(r)) {
          cont.push_back({layout.edge_vars[out], -1.0});
        }
        model.add_constraint(std::move(cont), Relation::Le, 0.0,
                             "cont_" + edge_tag(g, e));
      }
    }
  }

  // Threshold counting: x_i(v) >= (sum_u f(u,v) - (i-1)) / in(v), written as
  // sum_u f(u,v) - in(v) x_i(v) <= i-1. Minimization keeps x_i at zero
  // unless at least i inbound edges are used.
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::size_t in_v = g.in_degree(v);
    for (std::size_t i = 1; i <= in_v; ++i) {
      std::vector<LinearTerm> terms;
      for (EdgeIndex e : g.in_edges(v)) terms.push_back({layout.edge_vars[e], 1.0});
      terms.push_back(
          {layout.count_vars[v][i - 1], -static_cast<double>(in_v)});
      model.add_constraint(std::move(terms), Relation::Le,
                           static_cast<double>(i) - 1.0,
                           "cnt_n" + std::to_string(v) + "_i" +
                               std::to_string(i));
    }
  }

  return {std::move(model), std::move(layout)};
}

IabTree extract_tree(const MeasurementsGraph& g, const VariableLayout& layout,
                     const Solution& sol,
                     const std::vector<Commodity>& commodities) {
  if (sol.assignment.empty()) {
    throw std::logic_error("extract_tree requires a solved assignment");
  }
  IabTree tree;
  const NodeId donor = g.donor();

  std::vector<EdgeIndex> used;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (sol.assignment[layout.edge_vars[e]]) used.push_back(e);
  }
  for (EdgeIndex e : used) {
    const Edge& edge = g.edge(e);
    auto [it, inserted] = tree.parent.emplace(edge.src, edge.dst);
    if (!inserted) {
      throw std::logic_error("solution uses two outgoing edges at node " +
                             std::to_string(edge.src));
    }
    tree.active.insert(edge.src);
    tree.active.insert(edge.dst);
  }
  tree.active.insert(donor);

  tree.commodity_paths.resize(commodities.size());
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    // Per-commodity next-edge lookup; out-degree <= 1 per node is inherited
    // from the aggregate rule, so the flow is a single path.
    std::map<NodeId, EdgeIndex> next;
    for (const auto& [e, var] : layout.commodity_edge_vars[k]) {
      if (!sol.assignment[var]) continue;
      if (!next.emplace(g.edge(e).src, e).second) {
        throw std::logic_error("commodity " + std::to_string(k) +
                               " branches at node " +
                               std::to_string(g.edge(e).src));
      }
    }
    NodeId at = commodities[k].source;
    std::size_t steps = 0;
    while (at != donor) {
      const auto it = next.find(at);
      if (it == next.end() || ++steps > g.node_count()) {
        throw std::logic_error("commodity " + std::to_string(k) +
                               " does not reach the donor");
      }
      tree.commodity_paths[k].push_back(it->second);
      tree.edge_use[it->second].push_back(k);
      at = g.edge(it->second).dst;
    }
  }

  if (auto violation = tree_check(g, tree, commodities, TreeCheckMode::Full)) {
    throw std::logic_error("extracted tree violates '" + violation->rule +
                           "': " + violation->detail);
  }
  return tree;
}

std::optional<Violation> eval_bnlp(const MeasurementsGraph& g,
                                   const std::vector<Commodity>& commodities,
                                   const BnlpAssignment& c) {
  const std::size_t n_nodes = g.node_count();
  const std::size_t n_edges = g.edge_count();
  if (c.node_active.size() != n_nodes || c.edge_used.size() != n_edges ||
      c.commodity_edge.size() != commodities.size()) {
    throw std::invalid_argument("assignment does not cover the instance");
  }
  for (const auto& fk : c.commodity_edge) {
    if (fk.size() != n_edges) {
      throw std::invalid_argument("assignment does not cover the instance");
    }
  }

  // Shared capacity: aggregate routed demand on (u,v) within the 1/n
  // round-robin share of v. Skipped when no inbound edge of v is used; the
  // aggregation rule then forces the edge itself to carry nothing.
  for (EdgeIndex e = 0; e < n_edges; ++e) {
    const Edge& edge = g.edge(e);
    int used_in = 0;
    for (EdgeIndex in_e : g.in_edges(edge.dst)) used_in += c.edge_used[in_e];
    if (used_in == 0) continue;
    double load_mbps = 0.0;
    for (std::size_t k = 0; k < commodities.size(); ++k) {
      if (c.commodity_edge[k][e]) {
        load_mbps += commodities[k].demand_bps / kBpsPerMbps;
      }
    }
    const double share_mbps = edge.capacity_bps / kBpsPerMbps / used_in;
    if (load_mbps > share_mbps + kCapacityTolMbps) {
      return Violation{"shared capacity",
                       "edge (" + std::to_string(edge.src) + " -> " +
                           std::to_string(edge.dst) + ") load " +
                           std::to_string(load_mbps) + " Mb/s > share " +
                           std::to_string(share_mbps) + " Mb/s"};
    }
  }

  // Flow conservation at every node: +1 at the source, -1 at the donor.
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    for (NodeId v = 0; v < n_nodes; ++v) {
      int out = 0, in = 0;
      for (EdgeIndex e : g.out_edges(v)) out += c.commodity_edge[k][e];
      for (EdgeIndex e : g.in_edges(v)) in += c.commodity_edge[k][e];
      const int expect = v == commodities[k].source ? 1
                         : v == commodities[k].destination ? -1
                                                           : 0;
      if (out - in != expect) {
        return Violation{"flow conservation",
                         "commodity " + std::to_string(k) + " at node " +
                             std::to_string(v) + ": out-in = " +
                             std::to_string(out - in) + ", expected " +
                             std::to_string(expect)};
      }
    }
  }

  // Activation: any used incident edge forces a(v) = 1.
  for (NodeId v = 0; v < n_nodes; ++v) {
    int incident = 0;
    for (EdgeIndex e : g.out_edges(v)) incident += c.edge_used[e];
    for (EdgeIndex e : g.in_edges(v)) incident += c.edge_used[e];
    if (incident > 0 && !c.node_active[v]) {
      return Violation{"activation",
                       "node " + std::to_string(v) +
                           " carries flow but is marked asleep"};
    }
  }

  // Aggregation: f(u,v) >= f_k(u,v).
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    for (EdgeIndex e = 0; e < n_edges; ++e) {
      if (c.commodity_edge[k][e] && !c.edge_used[e]) {
        return Violation{"aggregation",
                         "commodity " + std::to_string(k) + " uses edge (" +
                             std::to_string(g.edge(e).src) + " -> " +
                             std::to_string(g.edge(e).dst) +
                             ") not marked used"};
      }
    }
  }

  // Out-degree at most one over used edges.
  for (NodeId v = 0; v < n_nodes; ++v) {
    int out = 0;
    for (EdgeIndex e : g.out_edges(v)) out += c.edge_used[e];
    if (out > 1) {
      return Violation{"out-degree",
                       "node " + std::to_string(v) + " has " +
                           std::to_string(out) + " outgoing used edges"};
    }
  }
  return std::nullopt;
}

SolveInstanceResult solve_instance(const MeasurementsGraph& g,
                                   const std::vector<Commodity>& commodities,
                                   const SolveBudget& budget) {
  auto [model, layout] = build_blp(g, commodities);
  const Solution sol = solve_exact(model, budget);

  SolveInstanceResult result;
  result.status = sol.status;
  result.solve_ms = sol.solve_ms;
  result.nodes = sol.nodes;
  if (sol.status == SolveStatus::Optimal) {
    result.tree = extract_tree(g, layout, sol, commodities);
    result.objective = sol.objective_value;
  } else if (sol.status == SolveStatus::Infeasible) {
    InfeasibilityDiagnostic diag;
    for (const Commodity& k : commodities) {
      diag.total_demand_mbps += k.demand_bps / kBpsPerMbps;
      if (g.out_degree(k.source) == 0) diag.isolated_ues.push_back(k.source);
    }
    // Round-robin intake at the donor is capped by its single best inbound
    // link: n active links each deliver at most c/n <= max c.
    for (EdgeIndex e : g.in_edges(g.donor())) {
      diag.donor_intake_bound_mbps = std::max(
          diag.donor_intake_bound_mbps, g.edge(e).capacity_bps / kBpsPerMbps);
    }
    result.diagnostic = std::move(diag);
  }
  return result;
}

}  // namespace iab
