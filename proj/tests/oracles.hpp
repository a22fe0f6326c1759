#pragma once

// Independent reference implementations used to check the production code.
// Everything here recomputes results from first principles (exhaustive
// enumeration, per-path scans, text re-parsing) and must not share logic
// with the library paths it verifies.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iab/graph.hpp"
#include "iab/milp.hpp"
#include "iab/optimizer.hpp"

namespace iab::testing {

// ---------------------------------------------------------------------------
// Exhaustive 2^n reference for the exact solver.

struct BruteForceResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<std::uint8_t> assignment;
};

inline BruteForceResult brute_force_solve(const MilpModel& model) {
  const std::size_t n = model.variable_count();
  BruteForceResult best;
  std::vector<std::uint8_t> assignment(n, 0);
  // Counting with variable 0 as the most significant digit walks the
  // assignments in lexicographic order, so the first strict improvement
  // matches the solver's tie-break.
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    for (std::size_t v = 0; v < n; ++v) {
      assignment[v] = (mask >> (n - 1 - v)) & 1ULL;
    }
    if (!satisfies_all(model, assignment)) continue;
    double obj = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (assignment[v]) obj += model.objective()[v];
    }
    if (!best.feasible || obj < best.objective - kMilpFeasTol) {
      best.feasible = true;
      best.objective = obj;
      best.assignment = assignment;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exhaustive candidate-tree enumeration, scored through eval_bnlp. This is
// the nonlinear program's ground truth for small instances.

// Optimal number of active IAB relays, or -1 when no candidate tree is
// feasible.
inline int bnlp_optimal_relay_count(const MeasurementsGraph& g,
                                    const std::vector<Commodity>& commodities) {
  const NodeId donor = g.donor();
  std::vector<NodeId> relays;
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::IabNode) relays.push_back(n.id);
  }

  // Choice per relay: one outgoing backhaul edge or asleep (-1).
  std::vector<std::vector<int>> relay_choices(relays.size());
  for (std::size_t r = 0; r < relays.size(); ++r) {
    relay_choices[r].push_back(-1);
    for (EdgeIndex e : g.out_edges(relays[r])) {
      relay_choices[r].push_back(static_cast<int>(e));
    }
  }

  int best = -1;
  std::vector<int> relay_pick(relays.size(), -1);

  // Evaluates every UE attachment combo for the fixed relay forest. The
  // full assignment is only assembled for combos that are canonical and
  // would improve the incumbent; everything else is rejected from the
  // chain walk alone.
  auto evaluate_attachments = [&](const std::vector<NodeId>& gnb_reaches) {
    // Backhaul chain (edge list to the donor) per reachable gNB.
    std::map<NodeId, std::vector<EdgeIndex>> chain;
    for (NodeId gnb : gnb_reaches) {
      std::vector<EdgeIndex> hops;
      NodeId at = gnb;
      while (at != donor) {
        const std::size_t idx =
            std::find(relays.begin(), relays.end(), at) - relays.begin();
        hops.push_back(static_cast<EdgeIndex>(relay_pick[idx]));
        at = g.edge(hops.back()).dst;
      }
      chain[gnb] = std::move(hops);
    }

    std::vector<std::vector<EdgeIndex>> ue_choices(commodities.size());
    for (std::size_t k = 0; k < commodities.size(); ++k) {
      for (EdgeIndex e : g.out_edges(commodities[k].source)) {
        if (chain.count(g.edge(e).dst)) ue_choices[k].push_back(e);
      }
      if (ue_choices[k].empty()) return;  // this forest cannot serve k
    }

    std::vector<std::size_t> pick(commodities.size(), 0);
    while (true) {
      std::set<NodeId> on_path_relays;
      for (std::size_t k = 0; k < commodities.size(); ++k) {
        NodeId at = g.edge(ue_choices[k][pick[k]]).dst;
        while (at != donor) {
          on_path_relays.insert(at);
          const std::size_t idx =
              std::find(relays.begin(), relays.end(), at) - relays.begin();
          at = g.edge(static_cast<EdgeIndex>(relay_pick[idx])).dst;
        }
      }
      // Canonical forests only: a parented relay off every path shows up
      // again as the same forest with that relay asleep.
      bool canonical = true;
      for (std::size_t r = 0; r < relays.size(); ++r) {
        if (relay_pick[r] >= 0 && !on_path_relays.count(relays[r])) {
          canonical = false;
          break;
        }
      }
      if (canonical &&
          (best < 0 || static_cast<int>(on_path_relays.size()) < best)) {
        BnlpAssignment cand;
        cand.node_active.assign(g.node_count(), 0);
        cand.edge_used.assign(g.edge_count(), 0);
        cand.commodity_edge.assign(
            commodities.size(), std::vector<std::uint8_t>(g.edge_count(), 0));
        for (std::size_t k = 0; k < commodities.size(); ++k) {
          const EdgeIndex access = ue_choices[k][pick[k]];
          cand.commodity_edge[k][access] = 1;
          cand.edge_used[access] = 1;
          for (EdgeIndex hop : chain[g.edge(access).dst]) {
            cand.commodity_edge[k][hop] = 1;
            cand.edge_used[hop] = 1;
          }
        }
        for (NodeId v = 0; v < g.node_count(); ++v) {
          bool incident = false;
          for (EdgeIndex e : g.out_edges(v)) incident |= cand.edge_used[e];
          for (EdgeIndex e : g.in_edges(v)) incident |= cand.edge_used[e];
          cand.node_active[v] = incident ? 1 : 0;
        }
        if (!eval_bnlp(g, commodities, cand)) {
          best = static_cast<int>(on_path_relays.size());
        }
      }
      // Next attachment combo.
      std::size_t k = 0;
      while (k < commodities.size() && ++pick[k] == ue_choices[k].size()) {
        pick[k] = 0;
        ++k;
      }
      if (k == commodities.size()) break;
    }
  };

  // Enumerate relay forests.
  std::vector<std::size_t> choice(relays.size(), 0);
  while (true) {
    for (std::size_t r = 0; r < relays.size(); ++r) {
      relay_pick[r] = relay_choices[r][choice[r]];
    }
    // Which gNBs reach the donor along the picked forest?
    std::vector<NodeId> reaches = {donor};
    bool valid_forest = true;
    for (std::size_t r = 0; r < relays.size() && valid_forest; ++r) {
      if (relay_pick[r] < 0) continue;
      NodeId at = relays[r];
      std::size_t hops = 0;
      while (at != donor) {
        const std::size_t idx =
            std::find(relays.begin(), relays.end(), at) - relays.begin();
        if (relay_pick[idx] < 0 || ++hops > relays.size()) {
          // Chain dead-ends in a sleeping relay or cycles.
          valid_forest = false;
          break;
        }
        at = g.edge(static_cast<EdgeIndex>(relay_pick[idx])).dst;
      }
      if (valid_forest) reaches.push_back(relays[r]);
    }
    if (valid_forest) evaluate_attachments(reaches);

    std::size_t r = 0;
    while (r < relays.size() && ++choice[r] == relay_choices[r].size()) {
      choice[r] = 0;
      ++r;
    }
    if (r == relays.size()) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Per-path capacity metric recomputation.

struct MetricOracle {
  double avg_idle = 0.0;
  double avg_sat = 0.0;
  double min_sat = 0.0;
};

inline MetricOracle recompute_metrics(const MeasurementsGraph& g,
                                      const IabTree& tree,
                                      const std::vector<Commodity>& commodities) {
  (void)commodities;  // the paths already pin the UE order
  // Inbound used degree recomputed from the paths alone.
  std::set<EdgeIndex> used;
  for (const auto& path : tree.commodity_paths) {
    for (EdgeIndex e : path) used.insert(e);
  }
  std::map<NodeId, int> inbound;
  for (EdgeIndex e : used) inbound[g.edge(e).dst] += 1;

  MetricOracle oracle;
  oracle.min_sat = std::numeric_limits<double>::infinity();
  std::size_t attached = 0;
  for (const auto& path : tree.commodity_paths) {
    if (path.empty()) {
      oracle.min_sat = 0.0;
      continue;
    }
    double idle = std::numeric_limits<double>::infinity();
    double sat = std::numeric_limits<double>::infinity();
    for (EdgeIndex e : path) {
      idle = std::min(idle, g.edge(e).capacity_bps);
      sat = std::min(sat, g.edge(e).capacity_bps / inbound[g.edge(e).dst]);
    }
    oracle.avg_idle += idle;
    oracle.avg_sat += sat;
    oracle.min_sat = std::min(oracle.min_sat, sat);
    ++attached;
  }
  if (attached) {
    oracle.avg_idle /= attached;
    oracle.avg_sat /= attached;
  }
  if (!std::isfinite(oracle.min_sat)) oracle.min_sat = 0.0;
  return oracle;
}

// ---------------------------------------------------------------------------
// Minimal LP-format reader covering the exporter's grammar, to round-trip
// exported models back into MilpModel form.

inline MilpModel parse_lp(const std::string& text) {
  MilpModel model;
  std::map<std::string, std::uint32_t> vars;

  // First pass: declare variables from the Binaries section so indices do
  // not depend on term order.
  {
    std::istringstream in(text);
    std::string line;
    bool in_binaries = false;
    while (std::getline(in, line)) {
      if (line.rfind("Binaries", 0) == 0) {
        in_binaries = true;
        continue;
      }
      if (line.rfind("End", 0) == 0) break;
      if (!in_binaries) continue;
      std::istringstream words(line);
      std::string w;
      while (words >> w) vars[w] = model.add_variable(w);
    }
  }

  enum class Section { None, Objective, Constraints };
  Section section = Section::None;
  std::string pending;

  auto parse_terms = [&](const std::string& expr,
                         std::vector<LinearTerm>& terms) {
    std::istringstream words(expr);
    std::string w;
    double sign = 1.0;
    double coeff = 0.0;
    bool has_coeff = false;
    while (words >> w) {
      if (w == "+") {
        sign = 1.0;
      } else if (w == "-") {
        sign = -1.0;
      } else if (std::isdigit(static_cast<unsigned char>(w[0])) ||
                 w[0] == '.') {
        coeff = sign * std::stod(w);
        has_coeff = true;
      } else {
        const double c = has_coeff ? coeff : sign;
        if (c != 0.0) terms.push_back({vars.at(w), c});
        has_coeff = false;
        sign = 1.0;
      }
    }
  };

  auto flush_row = [&](const std::string& row) {
    const std::size_t colon = row.find(':');
    std::string body = colon == std::string::npos ? row : row.substr(colon + 1);
    Relation rel;
    std::size_t rel_pos, rel_len;
    if ((rel_pos = body.find("<=")) != std::string::npos) {
      rel = Relation::Le;
      rel_len = 2;
    } else if ((rel_pos = body.find(">=")) != std::string::npos) {
      rel = Relation::Ge;
      rel_len = 2;
    } else if ((rel_pos = body.find('=')) != std::string::npos) {
      rel = Relation::Eq;
      rel_len = 1;
    } else {
      return;  // objective line
    }
    std::vector<LinearTerm> terms;
    parse_terms(body.substr(0, rel_pos), terms);
    model.add_constraint(std::move(terms),
                         rel, std::stod(body.substr(rel_pos + rel_len)));
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line.rfind("Minimize", 0) == 0) {
      section = Section::Objective;
      continue;
    }
    if (line.rfind("Subject To", 0) == 0) {
      if (section == Section::Objective && !pending.empty()) {
        // Objective body: "obj: <terms>".
        std::vector<LinearTerm> terms;
        parse_terms(pending.substr(pending.find(':') + 1), terms);
        for (const LinearTerm& t : terms) model.set_objective(t.var, t.coeff);
        pending.clear();
      }
      section = Section::Constraints;
      continue;
    }
    if (line.rfind("Binaries", 0) == 0 || line.rfind("End", 0) == 0) {
      if (!pending.empty()) flush_row(pending);
      pending.clear();
      section = Section::None;
      continue;
    }
    if (section == Section::None) continue;
    // Rows start at column 1 with "name:"; continuations are indented
    // further and carry no colon.
    const bool starts_row =
        line.size() > 1 && line[0] == ' ' && line[1] != ' ' &&
        line.find(':') != std::string::npos;
    if (starts_row && section == Section::Constraints && !pending.empty()) {
      flush_row(pending);
      pending.clear();
    }
    pending += " " + line;
  }
  return model;
}

}  // namespace iab::testing
