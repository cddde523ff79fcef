#include "fcnf/milp.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

#include "simplex.hpp"

namespace fcnf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

int MilpModel::add_variable(MilpVariable var) {
  if (var.name.empty()) throw ModelError("variable name must not be empty");
  if (!variable_lookup_.emplace(var.name, static_cast<int>(variables_.size())).second) {
    throw ModelError("duplicate variable name '" + var.name + "'");
  }
  if (std::isnan(var.lower) || std::isnan(var.upper) || var.lower > var.upper) {
    throw ModelError("variable '" + var.name + "' has an empty bound interval");
  }
  variables_.push_back(std::move(var));
  return static_cast<int>(variables_.size()) - 1;
}

int MilpModel::add_continuous(std::string name, double lower, double upper) {
  return add_variable({std::move(name), VarKind::Continuous, lower, upper});
}

int MilpModel::add_binary(std::string name) {
  return add_variable({std::move(name), VarKind::Binary, 0.0, 1.0});
}

std::vector<std::pair<int, double>> MilpModel::normalize_terms(
    std::vector<std::pair<int, double>> terms, const std::string& where) const {
  std::map<int, double> merged;
  for (const auto& [index, coeff] : terms) {
    if (index < 0 || index >= static_cast<int>(variables_.size())) {
      throw ModelError(where + ": term references undeclared variable index " +
                       std::to_string(index));
    }
    if (!std::isfinite(coeff)) {
      throw ModelError(where + ": non-finite coefficient");
    }
    merged[index] += coeff;
  }
  return {merged.begin(), merged.end()};
}

void MilpModel::add_constraint(std::string name, std::vector<std::pair<int, double>> terms,
                               ConstraintSense sense, double rhs) {
  if (name.empty()) throw ModelError("constraint name must not be empty");
  if (constraint_names_.count(name)) {
    throw ModelError("duplicate constraint name '" + name + "'");
  }
  if (!std::isfinite(rhs)) throw ModelError("constraint '" + name + "' has non-finite rhs");
  MilpConstraint c;
  c.terms = normalize_terms(std::move(terms), "constraint '" + name + "'");
  constraint_names_.insert(name);
  c.name = std::move(name);
  c.sense = sense;
  c.rhs = rhs;
  constraints_.push_back(std::move(c));
}

void MilpModel::set_objective(ObjectiveSense sense, std::vector<std::pair<int, double>> terms) {
  objective_sense_ = sense;
  objective_terms_ = normalize_terms(std::move(terms), "objective");
}

int MilpModel::variable_index(std::string_view name) const {
  auto it = variable_lookup_.find(name);
  return it == variable_lookup_.end() ? -1 : it->second;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

// Equality rows need no slack; inequality rows get one with a signed bound so
// that A x + s = b encodes the original sense.
detail::LpProblem standardize(const MilpModel& model) {
  const auto& vars = model.variables();
  const auto& cons = model.constraints();
  const int nv = static_cast<int>(vars.size());
  const int m = static_cast<int>(cons.size());
  int slack_count = 0;
  for (const MilpConstraint& c : cons) {
    if (c.sense != ConstraintSense::Equal) ++slack_count;
  }
  detail::LpProblem p;
  const int n = nv + slack_count;
  p.A = Eigen::MatrixXd::Zero(m, n);
  p.b.resize(m);
  p.c = Eigen::VectorXd::Zero(n);
  p.lower.resize(n);
  p.upper.resize(n);
  for (int j = 0; j < nv; ++j) {
    p.lower[j] = vars[static_cast<std::size_t>(j)].lower;
    p.upper[j] = vars[static_cast<std::size_t>(j)].upper;
  }
  const double sign = model.objective_sense() == ObjectiveSense::Maximize ? -1.0 : 1.0;
  for (const auto& [index, coeff] : model.objective_terms()) p.c[index] = sign * coeff;
  int slack = nv;
  for (int i = 0; i < m; ++i) {
    const MilpConstraint& c = cons[static_cast<std::size_t>(i)];
    for (const auto& [index, coeff] : c.terms) p.A(i, index) = coeff;
    p.b[i] = c.rhs;
    if (c.sense == ConstraintSense::Equal) continue;
    p.A(i, slack) = 1.0;
    if (c.sense == ConstraintSense::LessEqual) {
      p.lower[slack] = 0.0;
      p.upper[slack] = kInf;
    } else {
      p.lower[slack] = -kInf;
      p.upper[slack] = 0.0;
    }
    ++slack;
  }
  return p;
}

detail::SimplexOptions simplex_options(const SolverConfig& config) {
  detail::SimplexOptions opt;
  opt.phase1_tol = config.feasibility_tol;
  return opt;
}

// Largest constraint violation of a structural assignment, scaled by rhs size.
double max_violation(const MilpModel& model, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (const MilpConstraint& c : model.constraints()) {
    double lhs = 0.0;
    for (const auto& [index, coeff] : c.terms) lhs += coeff * x[index];
    double scale = std::max(1.0, std::abs(c.rhs));
    double violation = 0.0;
    switch (c.sense) {
      case ConstraintSense::LessEqual: violation = lhs - c.rhs; break;
      case ConstraintSense::GreaterEqual: violation = c.rhs - lhs; break;
      case ConstraintSense::Equal: violation = std::abs(lhs - c.rhs); break;
    }
    worst = std::max(worst, violation / scale);
  }
  return worst;
}

std::map<std::string, double> assignment_of(const MilpModel& model, const Eigen::VectorXd& x) {
  std::map<std::string, double> out;
  const auto& vars = model.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) out[vars[j].name] = x[static_cast<int>(j)];
  return out;
}

SolveStatus from_lp_status(detail::LpStatus status) {
  switch (status) {
    case detail::LpStatus::Optimal: return SolveStatus::Optimal;
    case detail::LpStatus::Infeasible: return SolveStatus::Infeasible;
    case detail::LpStatus::Unbounded: return SolveStatus::Unbounded;
    case detail::LpStatus::PivotLimit: return SolveStatus::IterationLimit;
  }
  return SolveStatus::IterationLimit;
}

}  // namespace

MilpResult solve_lp(const MilpModel& model, const SolverConfig& config) {
  auto start = std::chrono::steady_clock::now();
  detail::LpProblem problem = standardize(model);
  detail::SimplexOptions opt = simplex_options(config);
  detail::LpSolution lp = detail::solve_bounded_lp(problem, opt);
  if (lp.status == detail::LpStatus::Optimal &&
      max_violation(model, lp.x) > config.feasibility_tol) {
    // Retry once under Bland's rule from the start before giving up.
    opt.bland_after = 1;
    detail::LpSolution retry = detail::solve_bounded_lp(problem, opt);
    retry.pivots += lp.pivots;
    lp = retry;
    if (lp.status == detail::LpStatus::Optimal &&
        max_violation(model, lp.x) > config.feasibility_tol) {
      lp.status = detail::LpStatus::PivotLimit;
    }
  }
  MilpResult result;
  result.status = from_lp_status(lp.status);
  result.stats.pivots = lp.pivots;
  if (lp.status == detail::LpStatus::Optimal) {
    const double sign = model.objective_sense() == ObjectiveSense::Maximize ? -1.0 : 1.0;
    result.objective_value = sign * lp.objective;
    result.assignment = assignment_of(model, lp.x);
  }
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

MilpResult solve_milp(const MilpModel& model, const SolverConfig& config) {
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const detail::LpProblem base = standardize(model);
  const detail::SimplexOptions opt = simplex_options(config);
  std::vector<int> binaries;
  for (int j = 0; j < static_cast<int>(model.variables().size()); ++j) {
    if (model.variables()[static_cast<std::size_t>(j)].kind == VarKind::Binary) {
      binaries.push_back(j);
    }
  }

  struct Node {
    double bound;
    long id;
    std::vector<std::pair<int, double>> fixes;
  };
  struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
      return a.id > b.id;
    }
  };
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  queue.push({-kInf, 0, {}});
  long next_id = 1;

  double incumbent_objective = kInf;  // in minimization space
  Eigen::VectorXd incumbent_x;
  MilpResult result;
  bool limit_hit = false;
  bool numerical_failure = false;

  while (!queue.empty()) {
    if (config.node_limit > 0 && result.stats.nodes >= config.node_limit) {
      limit_hit = true;
      break;
    }
    if (config.time_limit_sec > 0.0 && elapsed() > config.time_limit_sec) {
      limit_hit = true;
      break;
    }
    Node node = queue.top();
    queue.pop();
    if (node.bound >= incumbent_objective - 1e-9) continue;

    detail::LpProblem problem = base;
    for (const auto& [index, value] : node.fixes) {
      problem.lower[index] = value;
      problem.upper[index] = value;
    }
    detail::LpSolution lp = detail::solve_bounded_lp(problem, opt);
    ++result.stats.nodes;
    result.stats.pivots += lp.pivots;

    if (lp.status == detail::LpStatus::Infeasible) continue;
    if (lp.status == detail::LpStatus::Unbounded) {
      result.status = SolveStatus::Unbounded;
      result.stats.wall_seconds = elapsed();
      return result;
    }
    if (lp.status == detail::LpStatus::PivotLimit) {
      numerical_failure = true;
      break;
    }
    if (lp.objective >= incumbent_objective - 1e-9) continue;

    // Branch on the binary closest to one half; ties to the lowest index.
    int branch_var = -1;
    double branch_score = kInf;
    for (int j : binaries) {
      double v = lp.x[j];
      if (std::min(v, 1.0 - v) <= config.integrality_tol) continue;
      double score = std::abs(v - 0.5);
      if (score < branch_score) {
        branch_score = score;
        branch_var = j;
      }
    }
    if (branch_var < 0) {
      incumbent_objective = lp.objective;
      incumbent_x = lp.x;
      continue;
    }
    for (double value : {0.0, 1.0}) {
      Node child;
      child.bound = lp.objective;
      child.id = next_id++;
      child.fixes = node.fixes;
      child.fixes.emplace_back(branch_var, value);
      queue.push(std::move(child));
    }
  }

  const double sign = model.objective_sense() == ObjectiveSense::Maximize ? -1.0 : 1.0;
  if (limit_hit || numerical_failure) {
    result.status = SolveStatus::IterationLimit;
    if (incumbent_x.size() > 0) {
      result.objective_value = sign * incumbent_objective;
      result.assignment = assignment_of(model, incumbent_x);
    }
  } else if (incumbent_x.size() > 0) {
    result.status = SolveStatus::Optimal;
    result.objective_value = sign * incumbent_objective;
    result.assignment = assignment_of(model, incumbent_x);
  } else {
    result.status = SolveStatus::Infeasible;
  }
  result.stats.wall_seconds = elapsed();
  return result;
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// LP-format identifiers: keep [A-Za-z0-9_], replace the rest, force a
// leading letter, and suffix duplicates. Deterministic for a fixed model.
std::vector<std::string> sanitized_names(const std::vector<std::string>& raw) {
  std::set<std::string> used;
  std::vector<std::string> out;
  out.reserve(raw.size());
  for (const std::string& name : raw) {
    std::string s;
    for (char ch : name) {
      s += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') ? ch : '_';
    }
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) s = "v" + s;
    std::string candidate = s;
    for (int counter = 2; !used.insert(candidate).second; ++counter) {
      candidate = s + "_" + std::to_string(counter);
    }
    out.push_back(candidate);
  }
  return out;
}

void append_terms(std::string& out, const std::vector<std::pair<int, double>>& terms,
                  const std::vector<std::string>& names, const std::string& fallback) {
  if (terms.empty()) {
    out += " 0 " + fallback;
    return;
  }
  bool first = true;
  for (const auto& [index, coeff] : terms) {
    if (first) {
      out += " " + format_number(coeff);
      first = false;
    } else if (coeff < 0.0) {
      out += " - " + format_number(-coeff);
    } else {
      out += " + " + format_number(coeff);
    }
    out += " " + names[static_cast<std::size_t>(index)];
  }
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  const auto& vars = model.variables();
  std::vector<std::string> raw_names;
  raw_names.reserve(vars.size());
  for (const MilpVariable& v : vars) raw_names.push_back(v.name);
  const std::vector<std::string> names = sanitized_names(raw_names);

  std::string out;
  out += model.objective_sense() == ObjectiveSense::Maximize ? "Maximize\n" : "Minimize\n";
  out += " obj:";
  if (vars.empty()) {
    out += "\nSubject To\nEnd\n";
    return out;
  }
  append_terms(out, model.objective_terms(), names, names.front());
  out += "\nSubject To\n";
  {
    std::vector<std::string> raw_cons;
    for (const MilpConstraint& c : model.constraints()) raw_cons.push_back(c.name);
    const std::vector<std::string> con_names = sanitized_names(raw_cons);
    for (std::size_t i = 0; i < model.constraints().size(); ++i) {
      const MilpConstraint& c = model.constraints()[i];
      out += " " + con_names[i] + ":";
      append_terms(out, c.terms, names, names.front());
      switch (c.sense) {
        case ConstraintSense::LessEqual: out += " <= "; break;
        case ConstraintSense::Equal: out += " = "; break;
        case ConstraintSense::GreaterEqual: out += " >= "; break;
      }
      out += format_number(c.rhs) + "\n";
    }
  }
  out += "Bounds\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const MilpVariable& v = vars[j];
    if (v.kind == VarKind::Binary) continue;
    if (v.lower == -kInf && v.upper == kInf) {
      out += " " + names[j] + " free\n";
    } else if (v.lower == -kInf) {
      out += " -inf <= " + names[j] + " <= " + format_number(v.upper) + "\n";
    } else if (v.upper == kInf) {
      out += " " + names[j] + " >= " + format_number(v.lower) + "\n";
    } else {
      out += " " + format_number(v.lower) + " <= " + names[j] + " <= " + format_number(v.upper) +
             "\n";
    }
  }
  bool any_binary = false;
  for (const MilpVariable& v : vars) any_binary |= v.kind == VarKind::Binary;
  if (any_binary) {
    out += "Binaries\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (vars[j].kind == VarKind::Binary) out += " " + names[j] + "\n";
    }
  }
  out += "End\n";
  return out;
}

}  // namespace fcnf
