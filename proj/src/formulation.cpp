#include "fcnf/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <vector>

namespace fcnf {

namespace {

const char* role_suffix(FlowRole role) {
  switch (role) {
    case FlowRole::Single: return "";
    case FlowRole::Initial: return "i";
    case FlowRole::Repaired: return "r";
  }
  return "";
}

void require_valid(const FlowNetwork& net) {
  std::vector<std::string> violations = validate_network(net);
  if (violations.empty()) return;
  std::string message = "invalid network:";
  for (const std::string& v : violations) message += "\n  " + v;
  throw std::invalid_argument(message);
}

void warn_on_conditioning(const FlowNetwork& net) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const DirectedEdge& e : net.edges) {
    for (double c : {e.fixed_cost, e.variable_cost}) {
      if (c > 0.0) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
    }
  }
  if (hi > 0.0 && hi / lo > 1e9) {
    std::cerr << "warning: cost magnitudes span a factor of " << hi / lo
              << "; simplex accuracy may suffer\n";
  }
}

struct RoleVars {
  std::vector<int> open;  // indexed like net.edges
  std::vector<int> flow;
};

// Adds one flow block (variables plus validity constraints) for a role.
RoleVars add_flow_block(MilpModel& model, const FlowNetwork& net, FlowRole role) {
  const std::string suffix = role_suffix(role);
  RoleVars vars;
  vars.open.reserve(net.edges.size());
  vars.flow.reserve(net.edges.size());
  for (const DirectedEdge& e : net.edges) {
    vars.open.push_back(model.add_binary("y" + suffix + "(" + e.id + ")"));
    vars.flow.push_back(model.add_continuous("f" + suffix + "(" + e.id + ")", 0.0, e.capacity));
  }
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const DirectedEdge& e = net.edges[k];
    model.add_constraint("cap" + suffix + "(" + e.id + ")",
                         {{vars.flow[k], 1.0}, {vars.open[k], -e.capacity}},
                         ConstraintSense::LessEqual, 0.0);
  }
  for (const std::string& v : net.vertices) {
    if (v == net.source || v == net.sink) continue;
    std::vector<std::pair<int, double>> terms;
    for (std::size_t k = 0; k < net.edges.size(); ++k) {
      if (net.edges[k].tail == v) terms.emplace_back(vars.flow[k], 1.0);
      if (net.edges[k].head == v) terms.emplace_back(vars.flow[k], -1.0);
    }
    if (terms.empty()) continue;  // isolated vertex, trivially balanced
    model.add_constraint("bal" + suffix + "(" + v + ")", std::move(terms),
                         ConstraintSense::Equal, 0.0);
  }
  // Net outflow of the source. The gross sum would let a cycle through the
  // source meet the target without delivering anything to the sink.
  std::vector<std::pair<int, double>> target_terms;
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    if (net.edges[k].tail == net.source) target_terms.emplace_back(vars.flow[k], 1.0);
    if (net.edges[k].head == net.source) target_terms.emplace_back(vars.flow[k], -1.0);
  }
  model.add_constraint("tgt" + suffix, std::move(target_terms), ConstraintSense::Equal,
                       net.target);
  return vars;
}

std::vector<std::pair<int, double>> cost_terms(const FlowNetwork& net, const RoleVars& vars) {
  std::vector<std::pair<int, double>> terms;
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    if (net.edges[k].fixed_cost != 0.0) terms.emplace_back(vars.open[k], net.edges[k].fixed_cost);
    if (net.edges[k].variable_cost != 0.0) {
      terms.emplace_back(vars.flow[k], net.edges[k].variable_cost);
    }
  }
  return terms;
}

// Builds the shared paired constraint system and returns both roles' vars.
std::pair<RoleVars, RoleVars> build_paired(MilpModel& model, const FlowNetwork& net,
                                           const PairedModelOptions& opts) {
  require_valid(net);
  warn_on_conditioning(net);
  for (const std::string& id : opts.locked_edges) {
    if (net.edge_index(id) < 0) {
      throw std::invalid_argument("locked edge '" + id + "' is not in the network");
    }
  }
  RoleVars initial = add_flow_block(model, net, FlowRole::Initial);
  RoleVars repaired = add_flow_block(model, net, FlowRole::Repaired);
  const std::size_t fail = static_cast<std::size_t>(net.edge_index(net.failable_edge));
  model.add_constraint("fail", {{repaired.flow[fail], 1.0}}, ConstraintSense::Equal, 0.0);
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    model.add_constraint("keep(" + net.edges[k].id + ")",
                         {{repaired.open[k], 1.0}, {initial.open[k], -1.0}},
                         ConstraintSense::GreaterEqual, 0.0);
  }
  if (opts.lock_source_flows) {
    for (const std::string& id : opts.locked_edges) {
      const std::size_t k = static_cast<std::size_t>(net.edge_index(id));
      model.add_constraint("lock(" + id + ")",
                           {{initial.flow[k], 1.0}, {repaired.flow[k], -1.0}},
                           ConstraintSense::Equal, 0.0);
    }
  }
  return {std::move(initial), std::move(repaired)};
}

void add_banded_equality(MilpModel& model, const std::string& name,
                         const std::vector<std::pair<int, double>>& terms, double rhs) {
  const double band = kEqualityBand * std::max(1.0, std::abs(rhs));
  model.add_constraint(name + "_hi", terms, ConstraintSense::LessEqual, rhs + band);
  model.add_constraint(name + "_lo", terms, ConstraintSense::GreaterEqual, rhs - band);
}

}  // namespace

std::string open_var_name(FlowRole role, const std::string& edge_id) {
  return std::string("y") + role_suffix(role) + "(" + edge_id + ")";
}

std::string flow_var_name(FlowRole role, const std::string& edge_id) {
  return std::string("f") + role_suffix(role) + "(" + edge_id + ")";
}

MilpModel base_fcnf_model(const FlowNetwork& net, bool exclude_failable) {
  require_valid(net);
  warn_on_conditioning(net);
  MilpModel model;
  RoleVars vars = add_flow_block(model, net, FlowRole::Single);
  if (exclude_failable) {
    const std::size_t fail = static_cast<std::size_t>(net.edge_index(net.failable_edge));
    model.add_constraint("excl_y", {{vars.open[fail], 1.0}}, ConstraintSense::Equal, 0.0);
    model.add_constraint("excl_f", {{vars.flow[fail], 1.0}}, ConstraintSense::Equal, 0.0);
  }
  model.set_objective(ObjectiveSense::Minimize, cost_terms(net, vars));
  return model;
}

MilpModel paired_model(const FlowNetwork& net, const PairedModelOptions& opts) {
  MilpModel model;
  build_paired(model, net, opts);
  return model;
}

MilpModel max_repair_cost_model(const FlowNetwork& net, const PairedModelOptions& opts,
                                double previous_repaired_cost, double epsilon) {
  if (!(previous_repaired_cost > 0.0)) {
    throw std::invalid_argument("previous repaired cost must be positive");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  MilpModel model;
  auto [initial, repaired] = build_paired(model, net, opts);
  (void)initial;
  auto repair_cost = cost_terms(net, repaired);
  model.add_constraint("repair_cap", repair_cost, ConstraintSense::LessEqual,
                       previous_repaired_cost - epsilon);
  model.set_objective(ObjectiveSense::Maximize, repair_cost);
  return model;
}

MilpModel min_initial_cost_model(const FlowNetwork& net, const PairedModelOptions& opts,
                                 double repaired_cost) {
  MilpModel model;
  auto [initial, repaired] = build_paired(model, net, opts);
  add_banded_equality(model, "repair_eq", cost_terms(net, repaired), repaired_cost);
  model.set_objective(ObjectiveSense::Minimize, cost_terms(net, initial));
  return model;
}

MilpModel min_repair_cost_model(const FlowNetwork& net, const PairedModelOptions& opts,
                                double initial_cost) {
  MilpModel model;
  auto [initial, repaired] = build_paired(model, net, opts);
  add_banded_equality(model, "initial_eq", cost_terms(net, initial), initial_cost);
  model.set_objective(ObjectiveSense::Minimize, cost_terms(net, repaired));
  return model;
}

FlowSolution extract_flow_solution(const FlowNetwork& net,
                                   const std::map<std::string, double>& assignment,
                                   FlowRole role) {
  FlowSolution sol;
  for (const DirectedEdge& e : net.edges) {
    double y = assignment.at(open_var_name(role, e.id));
    double f = assignment.at(flow_var_name(role, e.id));
    if (y > 0.5) {
      sol.open.insert(e.id);
      sol.flow[e.id] = std::clamp(f, 0.0, e.capacity);
    }
  }
  sol.cost = flow_cost(net, sol);
  return sol;
}

}  // namespace fcnf
