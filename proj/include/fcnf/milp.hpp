#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fcnf {

enum class VarKind { Continuous, Binary };
enum class ConstraintSense { LessEqual, Equal, GreaterEqual };
enum class ObjectiveSense { Minimize, Maximize };

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MilpVariable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 0.0;
};

struct MilpConstraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  ConstraintSense sense = ConstraintSense::LessEqual;
  double rhs = 0.0;
};

// A mixed-integer linear program over continuous and binary variables.
// Names are unique; binary variables carry the implied bounds [0, 1];
// duplicate variables within one constraint are merged by summation.
class MilpModel {
 public:
  int add_continuous(std::string name, double lower, double upper);
  int add_binary(std::string name);
  void add_constraint(std::string name, std::vector<std::pair<int, double>> terms,
                      ConstraintSense sense, double rhs);
  void set_objective(ObjectiveSense sense, std::vector<std::pair<int, double>> terms);

  int variable_index(std::string_view name) const;  // -1 when absent
  const std::vector<MilpVariable>& variables() const { return variables_; }
  const std::vector<MilpConstraint>& constraints() const { return constraints_; }
  ObjectiveSense objective_sense() const { return objective_sense_; }
  const std::vector<std::pair<int, double>>& objective_terms() const { return objective_terms_; }

 private:
  int add_variable(MilpVariable var);
  std::vector<std::pair<int, double>> normalize_terms(std::vector<std::pair<int, double>> terms,
                                                      const std::string& where) const;

  std::vector<MilpVariable> variables_;
  std::vector<MilpConstraint> constraints_;
  ObjectiveSense objective_sense_ = ObjectiveSense::Minimize;
  std::vector<std::pair<int, double>> objective_terms_;
  std::map<std::string, int, std::less<>> variable_lookup_;
  std::set<std::string, std::less<>> constraint_names_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct SolveStats {
  long nodes = 0;
  long pivots = 0;
  double wall_seconds = 0.0;
};

struct MilpResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective_value = 0.0;                // valid for Optimal, or best incumbent on a limit
  std::map<std::string, double> assignment;    // empty unless an incumbent exists
  SolveStats stats;
  bool has_incumbent() const { return !assignment.empty(); }
};

struct SolverConfig {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  long node_limit = 0;          // 0 = unlimited
  double time_limit_sec = 0.0;  // 0 = unlimited
};

// Solves the continuous relaxation (binary variables relaxed to [0, 1]) with
// a bounded-variable primal simplex.
MilpResult solve_lp(const MilpModel& model, const SolverConfig& config = {});

// Exact branch-and-bound over the binary variables: best-bound node
// selection, branching on the most fractional binary (ties to the lowest
// index). Deterministic given identical model and config.
MilpResult solve_milp(const MilpModel& model, const SolverConfig& config = {});

// CPLEX-style LP-format text for cross-checking with external solvers.
// Variable and constraint names are sanitized to the LP identifier charset;
// the mapping is deterministic.
std::string export_lp(const MilpModel& model);

const char* to_string(SolveStatus status);

}  // namespace fcnf
