#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "iab/graph.hpp"
#include "iab/milp.hpp"

namespace iab {

/// Maps model variables back to graph entities.
///  - commodity_edge_vars[k]: (edge, var) pairs for the edges commodity k may
///    use, i.e. every backhaul edge plus the access edges of its own source.
///  - edge_vars[e]: the used-by-any-commodity indicator of edge e.
///  - count_vars[v][i-1]: threshold indicator "at least i inbound edges of v
///    are used", for i = 1..in(v). These replace the per-node activation
///    variable in the linearized model and carry the whole objective.
struct VariableLayout {
  std::vector<std::vector<std::pair<EdgeIndex, std::uint32_t>>>
      commodity_edge_vars;
  std::vector<std::uint32_t> edge_vars;
  std::vector<std::vector<std::uint32_t>> count_vars;
};

/// Assembles the linearized program: minimize the number of used edges
/// (sum of threshold indicators) subject to per-commodity flow conservation,
/// round-robin shared capacity in linearized form, edge aggregation and the
/// out-degree-1 tree rule. Capacities and demands are scaled to Mb/s.
std::pair<MilpModel, VariableLayout> build_blp(
    const MeasurementsGraph& g, const std::vector<Commodity>& commodities);

/// Reads the optimal assignment back into a routing tree. Requires an
/// Optimal (or feasible incumbent) solution; throws std::logic_error when
/// the assignment does not decode to a valid tree, which would indicate a
/// bug in the model builder.
IabTree extract_tree(const MeasurementsGraph& g, const VariableLayout& layout,
                     const Solution& sol,
                     const std::vector<Commodity>& commodities);

/// Full candidate assignment of the nonlinear program's variables.
struct BnlpAssignment {
  std::vector<std::uint8_t> node_active;                  // a(v), by node id
  std::vector<std::uint8_t> edge_used;                    // f(u,v), by edge
  std::vector<std::vector<std::uint8_t>> commodity_edge;  // f_k(u,v), [k][e]
};

/// Checks the nonlinear program directly: shared capacity with the 1/n
/// round-robin divisor (vacuous when no inbound edge of the head is used),
/// flow conservation, activation, aggregation and out-degree rules. This is
/// the reference evaluator the linearization is tested against.
std::optional<Violation> eval_bnlp(const MeasurementsGraph& g,
                                   const std::vector<Commodity>& commodities,
                                   const BnlpAssignment& candidate);

/// Why an instance cannot be served: demand versus the donor's round-robin
/// intake bound (at most its single best inbound link rate), plus UEs with
/// no admissible access edge at all.
struct InfeasibilityDiagnostic {
  double total_demand_mbps = 0.0;
  double donor_intake_bound_mbps = 0.0;
  std::vector<NodeId> isolated_ues;
};

struct SolveInstanceResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<IabTree> tree;  // set when Optimal
  double objective = 0.0;       // number of used edges when Optimal
  double solve_ms = 0.0;
  std::uint64_t nodes = 0;
  std::optional<InfeasibilityDiagnostic> diagnostic;  // set when Infeasible
};

/// build_blp + solve_exact + extract_tree.
SolveInstanceResult solve_instance(const MeasurementsGraph& g,
                                   const std::vector<Commodity>& commodities,
                                   const SolveBudget& budget = {});

}  // namespace iab
