#include "fcnf/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fcnf {

namespace {

using nlohmann::json;

// Rejects any key outside `allowed`; missing required keys are reported by
// the typed getters below.
void reject_unknown_fields(const json& j, const std::vector<std::string>& allowed,
                           const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ParseError(where + ": unknown field '" + item.key() + "'");
    }
  }
}

const json& get_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  const json& v = get_field(j, key, where);
  if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

double get_number(const json& j, const char* key, const std::string& where) {
  const json& v = get_field(j, key, where);
  if (!v.is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

int FlowNetwork::edge_index(std::string_view id) const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

const DirectedEdge* FlowNetwork::find_edge(std::string_view id) const {
  int i = edge_index(id);
  return i < 0 ? nullptr : &edges[static_cast<std::size_t>(i)];
}

bool FlowNetwork::has_vertex(std::string_view v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

std::vector<std::string> validate_network(const FlowNetwork& net) {
  std::vector<std::string> out;
  if (net.source == net.sink) {
    out.push_back("source and sink must differ (both are '" + net.source + "')");
  }
  if (!net.has_vertex(net.source)) {
    out.push_back("source '" + net.source + "' is not a declared vertex");
  }
  if (!net.has_vertex(net.sink)) {
    out.push_back("sink '" + net.sink + "' is not a declared vertex");
  }
  if (!(net.target >= 0.0)) {
    out.push_back("target must be nonnegative, got " + std::to_string(net.target));
  }
  std::set<std::string> seen_vertices(net.vertices.begin(), net.vertices.end());
  if (seen_vertices.size() != net.vertices.size()) {
    out.push_back("duplicate vertex identifiers");
  }
  std::set<std::string> edge_ids;
  for (const DirectedEdge& e : net.edges) {
    if (!edge_ids.insert(e.id).second) {
      out.push_back("duplicate edge id '" + e.id + "'");
    }
    if (!net.has_vertex(e.tail) || !net.has_vertex(e.head)) {
      out.push_back("edge '" + e.id + "' has an endpoint outside the vertex set");
    }
    if (e.tail == e.head) {
      out.push_back("edge '" + e.id + "' is a self-loop");
    }
    if (!(e.capacity >= 0.0)) {
      out.push_back("edge '" + e.id + "' has negative capacity");
    }
    if (!(e.fixed_cost >= 0.0)) {
      out.push_back("edge '" + e.id + "' has negative fixed cost");
    }
    if (!(e.variable_cost >= 0.0)) {
      out.push_back("edge '" + e.id + "' has negative variable cost");
    }
  }
  int matches = 0;
  for (const DirectedEdge& e : net.edges) {
    if (e.id == net.failable_edge) ++matches;
  }
  if (matches != 1) {
    out.push_back("failable_edge '" + net.failable_edge + "' must reference exactly one edge (found " +
                  std::to_string(matches) + ")");
  }
  return out;
}

double flow_cost(const FlowNetwork& net, const FlowSolution& sol) {
  double total = 0.0;
  for (const std::string& id : sol.open) {
    const DirectedEdge* e = net.find_edge(id);
    if (e == nullptr) throw UnknownEdgeError(id);
    total += e->fixed_cost;
  }
  for (const auto& [id, amount] : sol.flow) {
    const DirectedEdge* e = net.find_edge(id);
    if (e == nullptr) throw UnknownEdgeError(id);
    total += e->variable_cost * amount;
  }
  return total;
}

bool is_valid_flow(const FlowNetwork& net, const FlowSolution& sol,
                   bool exclude_failable, double tolerance) {
  // Per-vertex net balance, accumulated edge by edge. The flow value is the
  // net outflow of the source, so circulations through the source count zero.
  std::map<std::string, double> balance;
  double source_outflow = 0.0;
  for (const auto& [id, amount] : sol.flow) {
    const DirectedEdge* e = net.find_edge(id);
    if (e == nullptr) return false;  // references an edge outside the network
    if (amount < -tolerance) return false;
    double limit = sol.open.count(id) ? e->capacity : 0.0;
    if (amount > limit + tolerance) return false;
    balance[e->tail] -= amount;
    balance[e->head] += amount;
    if (e->tail == net.source) source_outflow += amount;
    if (e->head == net.source) source_outflow -= amount;
    if (exclude_failable && id == net.failable_edge && std::abs(amount) > tolerance) {
      return false;
    }
  }
  for (const std::string& id : sol.open) {
    if (net.find_edge(id) == nullptr) return false;
  }
  for (const auto& [vertex, net_in] : balance) {
    if (vertex == net.source || vertex == net.sink) continue;
    if (std::abs(net_in) > tolerance) return false;
  }
  return std::abs(source_outflow - net.target) <= tolerance;
}

bool check_repair_pair(const FlowNetwork& net, const FlowSolution& initial,
                       const FlowSolution& repaired) {
  (void)net;
  return std::includes(repaired.open.begin(), repaired.open.end(),
                       initial.open.begin(), initial.open.end());
}

FlowNetwork network_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("network: top-level value must be an object");
  reject_unknown_fields(
      j, {"vertices", "edges", "source", "sink", "target", "failable_edge"}, "network");
  FlowNetwork net;
  const json& verts = get_field(j, "vertices", "network");
  if (!verts.is_array()) throw ParseError("network: 'vertices' must be an array");
  for (const json& v : verts) {
    if (!v.is_string()) throw ParseError("network: vertex ids must be strings");
    net.vertices.push_back(v.get<std::string>());
  }
  const json& edges = get_field(j, "edges", "network");
  if (!edges.is_array()) throw ParseError("network: 'edges' must be an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const json& je = edges[i];
    std::string where = "network.edges[" + std::to_string(i) + "]";
    if (!je.is_object()) throw ParseError(where + ": must be an object");
    reject_unknown_fields(je, {"id", "tail", "head", "capacity", "fixed_cost", "variable_cost"},
                          where);
    DirectedEdge e;
    e.id = get_string(je, "id", where);
    e.tail = get_string(je, "tail", where);
    e.head = get_string(je, "head", where);
    e.capacity = get_number(je, "capacity", where);
    e.fixed_cost = get_number(je, "fixed_cost", where);
    e.variable_cost = get_number(je, "variable_cost", where);
    net.edges.push_back(std::move(e));
  }
  net.source = get_string(j, "source", "network");
  net.sink = get_string(j, "sink", "network");
  net.target = get_number(j, "target", "network");
  net.failable_edge = get_string(j, "failable_edge", "network");
  return net;
}

nlohmann::json network_to_json(const FlowNetwork& net) {
  json j;
  j["vertices"] = net.vertices;
  json edges = json::array();
  for (const DirectedEdge& e : net.edges) {
    edges.push_back({{"id", e.id},
                     {"tail", e.tail},
                     {"head", e.head},
                     {"capacity", e.capacity},
                     {"fixed_cost", e.fixed_cost},
                     {"variable_cost", e.variable_cost}});
  }
  j["edges"] = std::move(edges);
  j["source"] = net.source;
  j["sink"] = net.sink;
  j["target"] = net.target;
  j["failable_edge"] = net.failable_edge;
  return j;
}

FlowSolution solution_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("solution: top-level value must be an object");
  reject_unknown_fields(j, {"flow", "open", "cost"}, "solution");
  FlowSolution sol;
  const json& flow = get_field(j, "flow", "solution");
  if (!flow.is_object()) throw ParseError("solution: 'flow' must be an object");
  for (const auto& item : flow.items()) {
    if (!item.value().is_number()) throw ParseError("solution: flow amounts must be numbers");
    sol.flow[item.key()] = item.value().get<double>();
  }
  const json& open = get_field(j, "open", "solution");
  if (!open.is_array()) throw ParseError("solution: 'open' must be an array");
  for (const json& id : open) {
    if (!id.is_string()) throw ParseError("solution: open entries must be edge id strings");
    sol.open.insert(id.get<std::string>());
  }
  sol.cost = get_number(j, "cost", "solution");
  return sol;
}

nlohmann::json solution_to_json(const FlowSolution& sol) {
  json flow = json::object();
  for (const auto& [id, amount] : sol.flow) flow[id] = amount;
  return {{"flow", std::move(flow)},
          {"open", std::vector<std::string>(sol.open.begin(), sol.open.end())},
          {"cost", sol.cost}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw ParseError("write failed: " + path);
}

FlowNetwork load_network(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return network_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace fcnf
