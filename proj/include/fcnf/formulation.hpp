#pragma once

#include <set>
#include <string>

#include "fcnf/milp.hpp"
#include "fcnf/network.hpp"

namespace fcnf {

// Driver-fed cost equalities are imposed as a pair of inequalities with this
// relative band, since their right-hand sides are themselves solve results.
inline constexpr double kEqualityBand = 1e-6;

struct PairedModelOptions {
  bool lock_source_flows = false;
  // Edges whose initial and repaired flows must match; only meaningful with
  // lock_source_flows set (the super-source edges after the CCS reduction).
  std::set<std::string> locked_edges;
};

// Single-flow model: binary open indicator and flow per edge, capacity
// coupling, conservation at internal vertices, source outflow equal to the
// target, total cost minimized. With exclude_failable the designated edge is
// forced closed, which gives the repaired-side terminal optimum.
MilpModel base_fcnf_model(const FlowNetwork& net, bool exclude_failable = false);

// Two-flow model over initial (yi, fi) and repaired (yr, fr) variables: both
// flows valid, the repaired flow avoids the failable edge, and every edge
// open initially stays open in the repair. No objective is attached.
MilpModel paired_model(const FlowNetwork& net, const PairedModelOptions& opts);

// The three chained models of one front iteration. Names follow their role:
//   max_repair_cost_model   — maximize repaired cost subject to being at
//                             least `epsilon` below `previous_repaired_cost`;
//   min_initial_cost_model  — minimize initial cost at pinned repaired cost;
//   min_repair_cost_model   — minimize repaired cost at pinned initial cost.
MilpModel max_repair_cost_model(const FlowNetwork& net, const PairedModelOptions& opts,
                                double previous_repaired_cost, double epsilon);
MilpModel min_initial_cost_model(const FlowNetwork& net, const PairedModelOptions& opts,
                                 double repaired_cost);
MilpModel min_repair_cost_model(const FlowNetwork& net, const PairedModelOptions& opts,
                                double initial_cost);

enum class FlowRole { Single, Initial, Repaired };

// Reads one flow solution out of a solved assignment: open comes from the
// binary indicators rounded to {0,1}, flows are clamped into [0, capacity]
// (and to zero on closed edges), and the cost is re-evaluated from the
// network so tolerance residue cannot leak into reported costs.
FlowSolution extract_flow_solution(const FlowNetwork& net,
                                   const std::map<std::string, double>& assignment,
                                   FlowRole role);

// Variable names used by the builders, exposed for extraction and tests.
std::string open_var_name(FlowRole role, const std::string& edge_id);
std::string flow_var_name(FlowRole role, const std::string& edge_id);

}  // namespace fcnf
