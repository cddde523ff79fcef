#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcnf/network.hpp"

namespace fcnf {

struct CidParseError : ParseError {
  using ParseError::ParseError;
};

// A capture site or storage site: capacity is an annual rate, variable cost
// is per ton handled, fixed cost is the one-time build cost.
struct CidResource {
  std::string id;
  double capacity = 0.0;
  double fixed_cost = 0.0;
  double variable_cost = 0.0;
};

struct CidPipe {
  std::string id;
  std::string tail;
  std::string head;
  double capacity = 0.0;
  double fixed_cost = 0.0;
  double variable_cost = 0.0;
};

// A capture-and-storage infrastructure design instance before reduction.
// Junction vertices carry no capacity or cost. Coordinates, when present,
// are opaque plotting metadata and never interpreted.
struct CidInstance {
  std::vector<CidResource> sources;
  std::vector<CidResource> sinks;
  std::vector<std::string> junctions;
  std::vector<CidPipe> pipes;
  double target = 0.0;
  std::string failable_sink;
  int project_years = 1;
  std::map<std::string, std::array<double, 2>> coordinates;
};

// Strict JSON ingest: unknown fields, missing fields, and invariant breaches
// (failable_sink not a declared sink, aggregate capacity below the target,
// reserved "__" identifier prefixes) are all reported as parse errors naming
// the offending location.
CidInstance parse_cid(const std::string& text);
CidInstance cid_from_json(const nlohmann::json& j);
nlohmann::json cid_to_json(const CidInstance& cid);
CidInstance load_cid(const std::string& path);

// Scales variable costs by project_years so that flow costs over the
// annual-rate network report whole-project cost; fixed costs are one-time
// and stay put. The result carries project_years = 1.
CidInstance annualize_costs(const CidInstance& cid);

struct CidReduction {
  FlowNetwork network;
  std::vector<std::string> super_source_edges;  // capture edges, one per source
  std::vector<std::string> super_sink_edges;    // injection edges, one per sink
};

// Super-source/super-sink construction: a new source vertex feeds every
// capture site and every storage site drains to a new sink vertex, with the
// sites' capacities and costs moved onto those edges; pipes map unchanged.
// The failable sink becomes the failable edge of the reduction.
CidReduction reduce_cid_to_fcnf(const CidInstance& cid);

// Reserved vertex names used by the reduction.
inline constexpr const char* kSuperSource = "__source__";
inline constexpr const char* kSuperSink = "__sink__";

// Edge id of the capture / injection edge created for a site.
std::string capture_edge_id(const std::string& source_id);
std::string injection_edge_id(const std::string& sink_id);

}  // namespace fcnf
