#include "iab/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace iab {

namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

std::uint32_t MilpModel::add_variable(std::string name) {
  names_.push_back(std::move(name));
  objective_.push_back(0.0);
  return static_cast<std::uint32_t>(names_.size() - 1);
}

void MilpModel::set_objective(std::uint32_t var, double coeff) {
  if (var >= names_.size()) {
    throw std::invalid_argument("objective references undeclared variable");
  }
  check_finite(coeff, "objective coefficient");
  objective_[var] = coeff;
}

void MilpModel::add_constraint(std::vector<LinearTerm> terms,
                               Relation relation, double rhs,
                               std::string name) {
  for (const LinearTerm& t : terms) {
    if (t.var >= names_.size()) {
      throw std::invalid_argument("constraint references undeclared variable");
    }
    check_finite(t.coeff, "constraint coefficient");
  }
  check_finite(rhs, "constraint rhs");
  constraints_.push_back({std::move(terms), relation, rhs, std::move(name)});
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::TimedOut:
      return "timed_out";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// LP export

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sanitize(const std::string& name, std::size_t index) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || (out[0] >= '0' && out[0] <= '9')) {
    out.insert(out.begin(), 'v');
  }
  // Suffix keeps names unique after sanitization.
  return out + "_" + std::to_string(index);
}

void append_terms(std::string& out, const std::vector<LinearTerm>& terms,
                  const std::vector<std::string>& names) {
  bool first = true;
  int on_line = 0;
  for (const LinearTerm& t : terms) {
    if (t.coeff == 0.0) continue;
    if (!first && on_line == 8) {
      out += "\n   ";
      on_line = 0;
    }
    if (first) {
      if (t.coeff < 0) out += "- ";
      first = false;
    } else {
      out += t.coeff < 0 ? " - " : " + ";
    }
    out += format_number(std::fabs(t.coeff));
    out += ' ';
    out += names[t.var];
    ++on_line;
  }
  if (first) out += "0 " + names.front();
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  std::vector<std::string> names;
  names.reserve(model.variable_count());
  for (std::size_t i = 0; i < model.variable_count(); ++i) {
    names.push_back(sanitize(model.variable_names()[i], i));
  }

  std::string out;
  out += "\\ binary program, " + std::to_string(model.variable_count()) +
         " variables, " + std::to_string(model.constraints().size()) +
         " constraints\n";
  out += "Minimize\n obj: ";
  std::vector<LinearTerm> obj_terms;
  for (std::uint32_t v = 0; v < model.variable_count(); ++v) {
    if (model.objective()[v] != 0.0) obj_terms.push_back({v, model.objective()[v]});
  }
  if (names.empty()) {
    out += "0";
  } else {
    append_terms(out, obj_terms, names);
  }
  out += "\nSubject To\n";
  std::size_t row = 0;
  for (const LinearConstraint& c : model.constraints()) {
    const std::string row_name =
        c.name.empty() ? "c" + std::to_string(row) : sanitize(c.name, row);
    ++row;
    out += " " + row_name + ": ";
    append_terms(out, c.terms, names);
    switch (c.relation) {
      case Relation::Le:
        out += " <= ";
        break;
      case Relation::Ge:
        out += " >= ";
        break;
      case Relation::Eq:
        out += " = ";
        break;
    }
    out += format_number(c.rhs);
    out += "\n";
  }
  out += "Binaries\n";
  int on_line = 0;
  for (const std::string& n : names) {
    if (on_line == 10) {
      out += "\n";
      on_line = 0;
    }
    out += " " + n;
    ++on_line;
  }
  if (!names.empty()) out += "\n";
  out += "End\n";
  return out;
}

// ---------------------------------------------------------------------------
// Exact solver

namespace {

// Rows are normalized to  sum(a_j x_j) <= rhs.
struct Row {
  std::vector<LinearTerm> terms;
  double rhs = 0.0;
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolveBudget& budget)
      : model_(model), budget_(budget) {
    const std::size_t n = model.variable_count();
    value_.assign(n, kFree);
    for (const LinearConstraint& c : model.constraints()) {
      if (c.relation == Relation::Le || c.relation == Relation::Eq) {
        rows_.push_back({c.terms, c.rhs});
      }
      if (c.relation == Relation::Ge || c.relation == Relation::Eq) {
        Row r;
        r.terms.reserve(c.terms.size());
        for (const LinearTerm& t : c.terms) r.terms.push_back({t.var, -t.coeff});
        r.rhs = -c.rhs;
        rows_.push_back(std::move(r));
      }
    }
    var_rows_.assign(n, {});
    min_act_.assign(rows_.size(), 0.0);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (const LinearTerm& t : rows_[r].terms) {
        var_rows_[t.var].push_back({static_cast<std::uint32_t>(r), t.coeff});
        min_act_[r] += std::min(t.coeff, 0.0);
      }
    }
    obj_row_ = static_cast<std::uint32_t>(rows_.size());
    in_queue_.assign(rows_.size() + 1, false);
    for (std::uint32_t v = 0; v < n; ++v) {
      const double c = model.objective()[v];
      obj_lb_ += std::min(c, 0.0);
      if (c != 0.0) obj_vars_.push_back(v);
    }

    // Disjoint unit-coefficient covering rows (sum of vars >= b) over
    // variables with nonnegative objective: any full assignment must pay at
    // least the cheapest free variable per unmet unit, and disjoint
    // supports make those payments additive. This surrogate closes the gap
    // between "fixed so far" and "still owed" that plain bound pruning
    // cannot see.
    std::vector<std::uint8_t> in_cover(n, 0);
    for (const LinearConstraint& c : model.constraints()) {
      if (c.relation != Relation::Ge || c.rhs <= 0.0) continue;
      bool eligible = !c.terms.empty();
      for (const LinearTerm& t : c.terms) {
        eligible = eligible && t.coeff == 1.0 && !in_cover[t.var] &&
                   model.objective()[t.var] >= 0.0;
      }
      if (!eligible) continue;
      CoverRow row;
      row.need = c.rhs;
      for (const LinearTerm& t : c.terms) {
        in_cover[t.var] = 1;
        row.support.push_back(t.var);
      }
      cover_rows_.push_back(std::move(row));
    }
  }

  Solution run() {
    start_ = std::chrono::steady_clock::now();
    Solution sol;
    std::vector<std::uint32_t> root_trail;
    enqueue_all();
    if (propagate(root_trail)) {
      dfs(0);
    }
    drain_queue();
    sol.nodes = nodes_;
    sol.solve_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start_)
                       .count();
    if (stopped_) {
      sol.status = SolveStatus::TimedOut;
    } else {
      sol.status =
          has_incumbent_ ? SolveStatus::Optimal : SolveStatus::Infeasible;
    }
    if (has_incumbent_) {
      sol.assignment = incumbent_;
      sol.objective_value = incumbent_obj_;
    }
    return sol;
  }

 private:
  static constexpr std::uint8_t kFree = 2;

  bool budget_exceeded() {
    if (stopped_) return true;
    if (budget_.max_nodes && nodes_ > budget_.max_nodes) {
      stopped_ = true;
      return true;
    }
    if (budget_.time_limit_ms > 0.0 && (nodes_ & 0x3ffULL) == 0) {
      const auto now = std::chrono::steady_clock::now();
      if (std::chrono::duration<double, std::milli>(now - start_).count() >
          budget_.time_limit_ms) {
        stopped_ = true;
        return true;
      }
    }
    return false;
  }

  void enqueue(std::uint32_t row) {
    if (!in_queue_[row]) {
      in_queue_[row] = true;
      queue_.push_back(row);
    }
  }

  void enqueue_all() {
    for (std::uint32_t r = 0; r < rows_.size(); ++r) enqueue(r);
  }

  void drain_queue() {
    while (!queue_.empty()) {
      in_queue_[queue_.back()] = false;
      queue_.pop_back();
    }
  }

  void fix(std::uint32_t var, std::uint8_t val,
           std::vector<std::uint32_t>& trail) {
    value_[var] = val;
    trail.push_back(var);
    for (const auto& [row, coeff] : var_rows_[var]) {
      min_act_[row] += (val ? coeff : 0.0) - std::min(coeff, 0.0);
      enqueue(row);
    }
    const double c = model_.objective()[var];
    if (c != 0.0) {
      obj_lb_ += (val ? c : 0.0) - std::min(c, 0.0);
      if (has_incumbent_) enqueue(obj_row_);
    }
  }

  void unfix(std::uint32_t var) {
    const std::uint8_t val = value_[var];
    value_[var] = kFree;
    for (const auto& [row, coeff] : var_rows_[var]) {
      min_act_[row] -= (val ? coeff : 0.0) - std::min(coeff, 0.0);
    }
    const double c = model_.objective()[var];
    obj_lb_ -= (val ? c : 0.0) - std::min(c, 0.0);
  }

  void rollback(std::vector<std::uint32_t>& trail) {
    while (!trail.empty()) {
      unfix(trail.back());
      trail.pop_back();
    }
  }

  // Fixed-point bound propagation over the queued rows: prunes violated
  // rows, fixes variables whose opposite value cannot fit. The objective is
  // propagated the same way against the incumbent cutoff (cost-based
  // filtering), so variables the remaining budget cannot afford are fixed
  // instead of discovered by enumeration. Forced fixings land on `trail`.
  // Returns false on conflict.
  bool propagate(std::vector<std::uint32_t>& trail) {
    while (!queue_.empty()) {
      const std::uint32_t row = queue_.back();
      queue_.pop_back();
      in_queue_[row] = false;
      if (row == obj_row_) {
        if (!propagate_objective(trail)) return false;
        continue;
      }
      const Row& r = rows_[row];
      if (min_act_[row] > r.rhs + kMilpFeasTol) return false;
      for (const LinearTerm& t : r.terms) {
        if (value_[t.var] != kFree) continue;
        if (min_act_[row] + std::fabs(t.coeff) > r.rhs + kMilpFeasTol) {
          fix(t.var, t.coeff > 0 ? 0 : 1, trail);
        }
      }
    }
    return true;
  }

  bool propagate_objective(std::vector<std::uint32_t>& trail) {
    if (!has_incumbent_) return true;
    const double cutoff = incumbent_obj_ - kMilpFeasTol;
    if (obj_lb_ + cover_lookahead() > cutoff) return false;
    for (std::uint32_t v : obj_vars_) {
      if (value_[v] != kFree) continue;
      const double c = model_.objective()[v];
      if (obj_lb_ + std::fabs(c) > cutoff) fix(v, c > 0 ? 0 : 1, trail);
    }
    return true;
  }

  // Minimum further objective mass owed to the disjoint covering rows.
  double cover_lookahead() const {
    double owed = 0.0;
    for (const CoverRow& row : cover_rows_) {
      double unmet = row.need;
      double cheapest_free = std::numeric_limits<double>::infinity();
      for (std::uint32_t v : row.support) {
        if (value_[v] == 1) {
          unmet -= 1.0;
        } else if (value_[v] == kFree) {
          cheapest_free = std::min(cheapest_free, model_.objective()[v]);
        }
      }
      if (unmet > kMilpFeasTol) {
        if (cheapest_free == std::numeric_limits<double>::infinity()) {
          return cheapest_free;  // row unsatisfiable, caller prunes
        }
        owed += std::ceil(unmet - kMilpFeasTol) * cheapest_free;
      }
    }
    return owed;
  }

  bool bound_allows_improvement() const {
    return !has_incumbent_ ||
           obj_lb_ + cover_lookahead() < incumbent_obj_ - kMilpFeasTol;
  }

  void record_incumbent() {
    has_incumbent_ = true;
    incumbent_.assign(value_.begin(), value_.end());
    double obj = 0.0;
    for (std::size_t v = 0; v < value_.size(); ++v) {
      if (value_[v] == 1) obj += model_.objective()[v];
    }
    incumbent_obj_ = obj;
  }

  // Depth-first search branching on the first free variable at or after
  // `from` (all earlier variables stay fixed on this path). The 0-branch is
  // explored first, which makes the surviving optimum the lexicographically
  // smallest one.
  void dfs(std::uint32_t from) {
    ++nodes_;
    if (budget_exceeded()) return;
    std::uint32_t var = from;
    while (var < value_.size() && value_[var] != kFree) ++var;
    if (var == value_.size()) {
      // Full assignment with every row propagated clean.
      record_incumbent();
      return;
    }
    for (int val = 0; val <= 1; ++val) {
      std::vector<std::uint32_t> trail;
      if (has_incumbent_) enqueue(obj_row_);
      fix(var, static_cast<std::uint8_t>(val), trail);
      const bool ok = propagate(trail);
      drain_queue();
      if (ok && bound_allows_improvement()) dfs(var + 1);
      rollback(trail);
      if (stopped_) return;
      if (!bound_allows_improvement()) return;
    }
  }

  const MilpModel& model_;
  SolveBudget budget_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> var_rows_;
  std::vector<double> min_act_;
  std::vector<std::uint8_t> value_;
  std::vector<std::uint8_t> incumbent_;
  bool has_incumbent_ = false;
  double incumbent_obj_ = std::numeric_limits<double>::infinity();
  double obj_lb_ = 0.0;
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
  std::vector<std::uint32_t> queue_;
  std::vector<std::uint8_t> in_queue_;
  std::uint32_t obj_row_ = 0;
  std::vector<std::uint32_t> obj_vars_;
  struct CoverRow {
    std::vector<std::uint32_t> support;
    double need = 0.0;
  };
  std::vector<CoverRow> cover_rows_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Solution solve_exact(const MilpModel& model, const SolveBudget& budget) {
  BranchAndBound solver(model, budget);
  return solver.run();
}

bool satisfies_all(const MilpModel& model,
                   const std::vector<std::uint8_t>& assignment) {
  if (assignment.size() != model.variable_count()) return false;
  for (const LinearConstraint& c : model.constraints()) {
    double act = 0.0;
    for (const LinearTerm& t : c.terms) {
      if (assignment[t.var]) act += t.coeff;
    }
    switch (c.relation) {
      case Relation::Le:
        if (act > c.rhs + kMilpFeasTol) return false;
        break;
      case Relation::Ge:
        if (act < c.rhs - kMilpFeasTol) return false;
        break;
      case Relation::Eq:
        if (std::fabs(act - c.rhs) > kMilpFeasTol) return false;
        break;
    }
  }
  return true;
}

}  // namespace iab
