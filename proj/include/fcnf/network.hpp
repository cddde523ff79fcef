#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fcnf {

// Absolute tolerance for flow-balance and capacity comparisons. LP bases do
// not hit equalities exactly, so every feasibility check accepts this slack.
inline constexpr double kFlowTolerance = 1e-6;

struct UnknownEdgeError : std::runtime_error {
  explicit UnknownEdgeError(const std::string& edge_id)
      : std::runtime_error("unknown edge id: " + edge_id) {}
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A directed edge with a fixed opening cost and a per-unit utilization cost.
// Parallel edges between the same vertex pair are allowed; `id` is the key.
struct DirectedEdge {
  std::string id;
  std::string tail;
  std::string head;
  double capacity = 0.0;
  double fixed_cost = 0.0;
  double variable_cost = 0.0;
};

// A capacitated fixed-charge flow network with one designated edge that may
// fail after the initial flow has been purchased.
struct FlowNetwork {
  std::vector<std::string> vertices;
  std::vector<DirectedEdge> edges;
  std::string source;
  std::string sink;
  double target = 0.0;
  std::string failable_edge;

  // Index of the edge with the given id, or -1.
  int edge_index(std::string_view id) const;
  const DirectedEdge* find_edge(std::string_view id) const;
  bool has_vertex(std::string_view v) const;
};

// One flow assignment. `open` lists every edge whose fixed charge is paid;
// an open edge may carry zero flow (that is how abandoned and failed edges
// are accounted in repaired solutions). Edges absent from `flow` carry none.
struct FlowSolution {
  std::map<std::string, double> flow;
  std::set<std::string> open;
  double cost = 0.0;
};

// Returns one human-readable description per violated FlowNetwork invariant;
// empty means the network is well formed. Violations are data, not faults.
std::vector<std::string> validate_network(const FlowNetwork& net);

// Total cost of a solution: fixed charges of open edges plus variable cost
// times flow on every edge. Throws UnknownEdgeError on ids not in `net`.
double flow_cost(const FlowNetwork& net, const FlowSolution& sol);

// True iff `sol` is a feasible flow of value `net.target`: per-edge capacity
// bounds (closed edges carry nothing), conservation at every vertex other
// than source and sink, and net source outflow equal to the target. With
// `exclude_failable` set the failable edge must carry zero flow.
bool is_valid_flow(const FlowNetwork& net, const FlowSolution& sol,
                   bool exclude_failable, double tolerance = kFlowTolerance);

// True iff every edge opened by the initial solution is also open in the
// repaired one, so the repair pays all fixed charges already incurred.
bool check_repair_pair(const FlowNetwork& net, const FlowSolution& initial,
                       const FlowSolution& repaired);

// JSON (de)serialization. The network schema is strict: the exact fields
// `vertices`, `edges` (id/tail/head/capacity/fixed_cost/variable_cost),
// `source`, `sink`, `target`, `failable_edge`; unknown fields are rejected.
FlowNetwork network_from_json(const nlohmann::json& j);
nlohmann::json network_to_json(const FlowNetwork& net);
FlowSolution solution_from_json(const nlohmann::json& j);
nlohmann::json solution_to_json(const FlowSolution& sol);

// File helpers. Both throw ParseError with the failing path in the message.
FlowNetwork load_network(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fcnf
