#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iab {

enum class Relation : std::uint8_t { Le, Ge, Eq };

struct LinearTerm {
  std::uint32_t var = 0;
  double coeff = 0.0;
};

struct LinearConstraint {
  std::vector<LinearTerm> terms;
  Relation relation = Relation::Le;
  double rhs = 0.0;
  std::string name;
};

/// Solver-agnostic binary linear program: minimize a linear objective over
/// 0/1 variables subject to linear rows. Capacities are expected in Mb/s so
/// coefficients stay well inside double precision.
class MilpModel {
 public:
  std::uint32_t add_variable(std::string name);

  /// Objective is minimized. Throws std::invalid_argument on unknown
  /// variable or non-finite coefficient.
  void set_objective(std::uint32_t var, double coeff);

  void add_constraint(std::vector<LinearTerm> terms, Relation relation,
                      double rhs, std::string name = "");

  std::size_t variable_count() const { return names_.size(); }
  const std::vector<std::string>& variable_names() const { return names_; }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<LinearConstraint>& constraints() const {
    return constraints_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<double> objective_;
  std::vector<LinearConstraint> constraints_;
};

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, TimedOut };

const char* to_string(SolveStatus status);

struct SolveBudget {
  std::uint64_t max_nodes = 0;  // 0 = unlimited
  double time_limit_ms = 0.0;   // 0 = unlimited
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  /// One 0/1 value per variable; empty when no incumbent was found.
  std::vector<std::uint8_t> assignment;
  double objective_value = 0.0;
  double solve_ms = 0.0;
  std::uint64_t nodes = 0;
};

/// Feasibility tolerance for constraint activity comparisons.
inline constexpr double kMilpFeasTol = 1e-9;

/// CPLEX LP text format (Minimize / Subject To / Binaries / End), with
/// variable names sanitized to [A-Za-z0-9_] and deterministic ordering, so
/// exports of the same model are byte-identical.
std::string export_lp(const MilpModel& model);

/// Depth-first branch and bound over the binary variables in declaration
/// order (0-branch first), with bound propagation through all rows and
/// objective-bound pruning. Deterministic: the returned optimum is the
/// lexicographically smallest optimal assignment.
Solution solve_exact(const MilpModel& model, const SolveBudget& budget = {});

/// True when `assignment` satisfies every row of `model` within tolerance.
bool satisfies_all(const MilpModel& model,
                   const std::vector<std::uint8_t>& assignment);

}  // namespace iab
