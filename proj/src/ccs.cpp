#include "fcnf/ccs.hpp"

#include <algorithm>
#include <set>

namespace fcnf {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& j, const std::vector<std::string>& allowed,
                           const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw CidParseError(where + ": unknown field '" + item.key() + "'");
    }
  }
}

const json& get_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw CidParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  const json& v = get_field(j, key, where);
  if (!v.is_string()) throw CidParseError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

double get_number(const json& j, const char* key, const std::string& where) {
  const json& v = get_field(j, key, where);
  if (!v.is_number()) throw CidParseError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double get_nonnegative(const json& j, const char* key, const std::string& where) {
  double v = get_number(j, key, where);
  if (!(v >= 0.0)) throw CidParseError(where + ": field '" + key + "' must be nonnegative");
  return v;
}

CidResource parse_resource(const json& j, const std::string& where) {
  if (!j.is_object()) throw CidParseError(where + ": must be an object");
  reject_unknown_fields(j, {"id", "capacity", "fixed_cost", "variable_cost"}, where);
  CidResource r;
  r.id = get_string(j, "id", where);
  r.capacity = get_nonnegative(j, "capacity", where);
  r.fixed_cost = get_nonnegative(j, "fixed_cost", where);
  r.variable_cost = get_nonnegative(j, "variable_cost", where);
  return r;
}

void check_id(const std::string& id, std::set<std::string>& seen, const std::string& where) {
  if (id.rfind("__", 0) == 0) {
    throw CidParseError(where + ": identifier '" + id + "' uses the reserved '__' prefix");
  }
  if (!seen.insert(id).second) {
    throw CidParseError(where + ": duplicate identifier '" + id + "'");
  }
}

}  // namespace

std::string capture_edge_id(const std::string& source_id) { return "__cap__" + source_id; }
std::string injection_edge_id(const std::string& sink_id) { return "__inj__" + sink_id; }

CidInstance cid_from_json(const json& j) {
  if (!j.is_object()) throw CidParseError("cid: top-level value must be an object");
  reject_unknown_fields(j,
                        {"sources", "sinks", "junctions", "pipes", "target", "failable_sink",
                         "project_years", "coordinates"},
                        "cid");
  CidInstance cid;
  const json& sources = get_field(j, "sources", "cid");
  if (!sources.is_array()) throw CidParseError("cid: 'sources' must be an array");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    cid.sources.push_back(parse_resource(sources[i], "cid.sources[" + std::to_string(i) + "]"));
  }
  const json& sinks = get_field(j, "sinks", "cid");
  if (!sinks.is_array()) throw CidParseError("cid: 'sinks' must be an array");
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    cid.sinks.push_back(parse_resource(sinks[i], "cid.sinks[" + std::to_string(i) + "]"));
  }
  const json& junctions = get_field(j, "junctions", "cid");
  if (!junctions.is_array()) throw CidParseError("cid: 'junctions' must be an array");
  for (const json& v : junctions) {
    if (!v.is_string()) throw CidParseError("cid: junction ids must be strings");
    cid.junctions.push_back(v.get<std::string>());
  }
  const json& pipes = get_field(j, "pipes", "cid");
  if (!pipes.is_array()) throw CidParseError("cid: 'pipes' must be an array");
  for (std::size_t i = 0; i < pipes.size(); ++i) {
    const json& jp = pipes[i];
    std::string where = "cid.pipes[" + std::to_string(i) + "]";
    if (!jp.is_object()) throw CidParseError(where + ": must be an object");
    reject_unknown_fields(jp, {"id", "tail", "head", "capacity", "fixed_cost", "variable_cost"},
                          where);
    CidPipe p;
    p.id = get_string(jp, "id", where);
    p.tail = get_string(jp, "tail", where);
    p.head = get_string(jp, "head", where);
    p.capacity = get_nonnegative(jp, "capacity", where);
    p.fixed_cost = get_nonnegative(jp, "fixed_cost", where);
    p.variable_cost = get_nonnegative(jp, "variable_cost", where);
    cid.pipes.push_back(std::move(p));
  }
  cid.target = get_nonnegative(j, "target", "cid");
  cid.failable_sink = get_string(j, "failable_sink", "cid");
  {
    const json& v = get_field(j, "project_years", "cid");
    if (!v.is_number_integer() || v.get<int>() < 1) {
      throw CidParseError("cid: 'project_years' must be a positive integer");
    }
    cid.project_years = v.get<int>();
  }
  if (auto it = j.find("coordinates"); it != j.end()) {
    if (!it->is_object()) throw CidParseError("cid: 'coordinates' must be an object");
    for (const auto& item : it->items()) {
      const json& pt = item.value();
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
        throw CidParseError("cid.coordinates['" + item.key() + "']: must be [x, y]");
      }
      cid.coordinates[item.key()] = {pt[0].get<double>(), pt[1].get<double>()};
    }
  }

  // Invariants.
  std::set<std::string> vertex_ids;
  for (std::size_t i = 0; i < cid.sources.size(); ++i) {
    check_id(cid.sources[i].id, vertex_ids, "cid.sources[" + std::to_string(i) + "]");
  }
  std::set<std::string> sink_ids;
  for (std::size_t i = 0; i < cid.sinks.size(); ++i) {
    check_id(cid.sinks[i].id, vertex_ids, "cid.sinks[" + std::to_string(i) + "]");
    sink_ids.insert(cid.sinks[i].id);
  }
  for (std::size_t i = 0; i < cid.junctions.size(); ++i) {
    check_id(cid.junctions[i], vertex_ids, "cid.junctions[" + std::to_string(i) + "]");
  }
  std::set<std::string> pipe_ids;
  for (std::size_t i = 0; i < cid.pipes.size(); ++i) {
    const CidPipe& p = cid.pipes[i];
    std::string where = "cid.pipes[" + std::to_string(i) + "]";
    check_id(p.id, pipe_ids, where);
    if (!vertex_ids.count(p.tail)) {
      throw CidParseError(where + ": endpoint '" + p.tail + "' is not a declared vertex");
    }
    if (!vertex_ids.count(p.head)) {
      throw CidParseError(where + ": endpoint '" + p.head + "' is not a declared vertex");
    }
    if (p.tail == p.head) throw CidParseError(where + ": self-loop");
  }
  if (!sink_ids.count(cid.failable_sink)) {
    throw CidParseError("cid: failable_sink '" + cid.failable_sink +
                        "' does not reference a declared sink");
  }
  double source_capacity = 0.0;
  for (const CidResource& s : cid.sources) source_capacity += s.capacity;
  double sink_capacity = 0.0;
  for (const CidResource& s : cid.sinks) sink_capacity += s.capacity;
  if (source_capacity < cid.target) {
    throw CidParseError("cid: aggregate source capacity " + std::to_string(source_capacity) +
                        " cannot meet target " + std::to_string(cid.target));
  }
  if (sink_capacity < cid.target) {
    throw CidParseError("cid: aggregate sink capacity " + std::to_string(sink_capacity) +
                        " cannot meet target " + std::to_string(cid.target));
  }
  for (const auto& [vertex, xy] : cid.coordinates) {
    (void)xy;
    if (!vertex_ids.count(vertex)) {
      throw CidParseError("cid.coordinates: '" + vertex + "' is not a declared vertex");
    }
  }
  return cid;
}

CidInstance parse_cid(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CidParseError(std::string("cid: ") + e.what());
  }
  return cid_from_json(j);
}

CidInstance load_cid(const std::string& path) {
  try {
    return parse_cid(read_text_file(path));
  } catch (const CidParseError& e) {
    throw CidParseError(path + ": " + e.what());
  }
}

nlohmann::json cid_to_json(const CidInstance& cid) {
  auto resource = [](const CidResource& r) {
    return json{{"id", r.id},
                {"capacity", r.capacity},
                {"fixed_cost", r.fixed_cost},
                {"variable_cost", r.variable_cost}};
  };
  json j;
  j["sources"] = json::array();
  for (const CidResource& s : cid.sources) j["sources"].push_back(resource(s));
  j["sinks"] = json::array();
  for (const CidResource& s : cid.sinks) j["sinks"].push_back(resource(s));
  j["junctions"] = cid.junctions;
  j["pipes"] = json::array();
  for (const CidPipe& p : cid.pipes) {
    j["pipes"].push_back({{"id", p.id},
                          {"tail", p.tail},
                          {"head", p.head},
                          {"capacity", p.capacity},
                          {"fixed_cost", p.fixed_cost},
                          {"variable_cost", p.variable_cost}});
  }
  j["target"] = cid.target;
  j["failable_sink"] = cid.failable_sink;
  j["project_years"] = cid.project_years;
  if (!cid.coordinates.empty()) {
    json coords = json::object();
    for (const auto& [vertex, xy] : cid.coordinates) coords[vertex] = {xy[0], xy[1]};
    j["coordinates"] = std::move(coords);
  }
  return j;
}

CidInstance annualize_costs(const CidInstance& cid) {
  CidInstance out = cid;
  const double years = cid.project_years;
  for (CidResource& s : out.sources) s.variable_cost *= years;
  for (CidResource& s : out.sinks) s.variable_cost *= years;
  for (CidPipe& p : out.pipes) p.variable_cost *= years;
  out.project_years = 1;
  return out;
}

CidReduction reduce_cid_to_fcnf(const CidInstance& cid) {
  CidReduction red;
  FlowNetwork& net = red.network;
  net.vertices.push_back(kSuperSource);
  for (const CidResource& s : cid.sources) net.vertices.push_back(s.id);
  for (const CidResource& s : cid.sinks) net.vertices.push_back(s.id);
  for (const std::string& v : cid.junctions) net.vertices.push_back(v);
  net.vertices.push_back(kSuperSink);
  for (const CidResource& s : cid.sources) {
    std::string id = capture_edge_id(s.id);
    net.edges.push_back({id, kSuperSource, s.id, s.capacity, s.fixed_cost, s.variable_cost});
    red.super_source_edges.push_back(std::move(id));
  }
  for (const CidPipe& p : cid.pipes) {
    net.edges.push_back({p.id, p.tail, p.head, p.capacity, p.fixed_cost, p.variable_cost});
  }
  for (const CidResource& s : cid.sinks) {
    std::string id = injection_edge_id(s.id);
    net.edges.push_back({id, s.id, kSuperSink, s.capacity, s.fixed_cost, s.variable_cost});
    red.super_sink_edges.push_back(std::move(id));
  }
  net.source = kSuperSource;
  net.sink = kSuperSink;
  net.target = cid.target;
  net.failable_edge = injection_edge_id(cid.failable_sink);
  return red;
}

}  // namespace fcnf
