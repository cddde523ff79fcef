#include "fcnf/gen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fcnf/oracle.hpp"

namespace fcnf::gen {

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

double Rng::uniform_real(double lo, double hi) {
  double unit = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + unit * (hi - lo);
}

namespace {

bool carries_target(const FlowNetwork& net, bool exclude_failable) {
  std::set<std::string> all;
  for (const DirectedEdge& e : net.edges) all.insert(e.id);
  return oracle::min_cost_flow_fixed_open(net, all, exclude_failable).has_value();
}

FlowNetwork attempt_network(Rng& rng, const NetworkGenParams& p) {
  FlowNetwork net;
  const int nv = rng.uniform_int(p.min_vertices, p.max_vertices);
  const int ne = rng.uniform_int(p.min_edges, p.max_edges);
  for (int i = 0; i < nv; ++i) net.vertices.push_back("v" + std::to_string(i));
  net.source = net.vertices.front();
  net.sink = net.vertices.back();
  net.target = p.targets[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(p.targets.size()) - 1))];

  // A spine path guarantees the sink is reachable; remaining edges are random.
  std::vector<int> interior;
  for (int i = 1; i + 1 < nv; ++i) interior.push_back(i);
  for (std::size_t i = interior.size(); i > 1; --i) {
    std::swap(interior[i - 1], interior[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  }
  const int spine_hops = interior.empty() ? 0 : rng.uniform_int(0, static_cast<int>(interior.size()));
  std::vector<int> path{0};
  for (int i = 0; i < spine_hops; ++i) path.push_back(interior[static_cast<std::size_t>(i)]);
  path.push_back(nv - 1);

  auto add_edge = [&](int tail, int head) {
    DirectedEdge e;
    e.id = "e" + std::to_string(net.edges.size());
    e.tail = net.vertices[static_cast<std::size_t>(tail)];
    e.head = net.vertices[static_cast<std::size_t>(head)];
    e.capacity = rng.uniform_real(p.capacity_factor_lo * net.target,
                                  p.capacity_factor_hi * net.target);
    e.fixed_cost = rng.uniform_int(p.fixed_cost_lo, p.fixed_cost_hi);
    e.variable_cost = rng.uniform_int(p.variable_cost_lo, p.variable_cost_hi);
    net.edges.push_back(std::move(e));
  };
  for (std::size_t i = 0; i + 1 < path.size(); ++i) add_edge(path[i], path[i + 1]);
  while (static_cast<int>(net.edges.size()) < ne) {
    int tail = rng.uniform_int(0, nv - 1);
    int head = rng.uniform_int(0, nv - 1);
    if (tail == head) continue;
    add_edge(tail, head);
  }
  net.failable_edge =
      net.edges[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(net.edges.size()) - 1))].id;
  return net;
}

}  // namespace

FlowNetwork random_network(std::uint64_t seed, const NetworkGenParams& params) {
  Rng rng(seed);
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    FlowNetwork net = attempt_network(rng, params);
    if (!validate_network(net).empty()) continue;
    if (!carries_target(net, false)) continue;
    if (params.require_repairable && !carries_target(net, true)) continue;
    return net;
  }
  throw std::runtime_error("random_network: no feasible instance within the attempt budget");
}

CidInstance random_cid(std::uint64_t seed, const CidGenParams& params) {
  Rng rng(seed);
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    CidInstance cid;
    cid.target = params.target;
    cid.project_years = params.project_years;
    for (int i = 0; i < params.sources; ++i) {
      // No capture retrofit cost, mirroring the evaluation dataset's shape.
      cid.sources.push_back({"src" + std::to_string(i),
                             static_cast<double>(rng.uniform_int(1, 3)), 0.0,
                             static_cast<double>(rng.uniform_int(1, 5))});
    }
    for (int i = 0; i < params.sinks; ++i) {
      cid.sinks.push_back({"snk" + std::to_string(i), static_cast<double>(rng.uniform_int(1, 4)),
                           static_cast<double>(rng.uniform_int(1, 10)),
                           static_cast<double>(rng.uniform_int(1, 3))});
    }
    for (int i = 0; i < params.junctions; ++i) cid.junctions.push_back("j" + std::to_string(i));

    std::vector<std::string> mids = cid.junctions;
    auto random_source = [&] {
      return cid.sources[static_cast<std::size_t>(rng.uniform_int(0, params.sources - 1))].id;
    };
    auto random_sink = [&] {
      return cid.sinks[static_cast<std::size_t>(rng.uniform_int(0, params.sinks - 1))].id;
    };
    auto add_pipe = [&](const std::string& tail, const std::string& head) {
      if (tail == head) return;
      cid.pipes.push_back({"p" + std::to_string(cid.pipes.size()), tail, head,
                           static_cast<double>(rng.uniform_int(1, 4)),
                           static_cast<double>(rng.uniform_int(1, 8)),
                           static_cast<double>(rng.uniform_int(0, 3))});
    };
    // Every source and sink touches the pipe web somewhere.
    for (const CidResource& s : cid.sources) {
      add_pipe(s.id, mids.empty() ? random_sink() : mids[static_cast<std::size_t>(rng.uniform_int(
                                        0, static_cast<int>(mids.size()) - 1))]);
    }
    for (const CidResource& s : cid.sinks) {
      add_pipe(mids.empty() ? random_source() : mids[static_cast<std::size_t>(rng.uniform_int(
                                  0, static_cast<int>(mids.size()) - 1))],
               s.id);
    }
    for (int i = 0; i < params.extra_pipes; ++i) add_pipe(random_source(), random_sink());
    cid.failable_sink = random_sink();

    nlohmann::json round_trip = cid_to_json(cid);
    try {
      cid = cid_from_json(round_trip);  // runs the ingest invariants
    } catch (const CidParseError&) {
      continue;
    }
    CidReduction red = reduce_cid_to_fcnf(cid);
    std::set<std::string> all;
    for (const DirectedEdge& e : red.network.edges) all.insert(e.id);
    if (!oracle::min_cost_flow_fixed_open(red.network, all, false)) continue;
    if (!oracle::min_cost_flow_fixed_open(red.network, all, true)) continue;
    return cid;
  }
  throw std::runtime_error("random_cid: no feasible instance within the attempt budget");
}

CidInstance nevada_like_cid(std::uint64_t seed) {
  Rng rng(seed);
  CidInstance cid;
  cid.target = 8.0;  // annual units to move
  cid.project_years = 20;

  // 21 sources emitting about 15.92 annual units in total, no retrofit cost.
  const int source_count = 21;
  std::vector<double> weights;
  double weight_sum = 0.0;
  for (int i = 0; i < source_count; ++i) {
    weights.push_back(rng.uniform_real(0.2, 1.8));
    weight_sum += weights.back();
  }
  for (int i = 0; i < source_count; ++i) {
    CidResource s;
    s.id = "src" + std::to_string(i);
    s.capacity = std::round(weights[static_cast<std::size_t>(i)] / weight_sum * 15.92 * 100.0) / 100.0;
    s.fixed_cost = 0.0;
    s.variable_cost = std::round(rng.uniform_real(25.0, 60.0) * 100.0) / 100.0;
    cid.sources.push_back(std::move(s));
    cid.coordinates[cid.sources.back().id] = {rng.uniform_real(0.0, 300.0),
                                              rng.uniform_real(0.0, 500.0)};
  }
  // 3 sinks with identical storage costs and ample capacity (about 392
  // cumulative units over the project, expressed as an annual rate).
  for (int i = 0; i < 3; ++i) {
    CidResource s;
    s.id = "snk" + std::to_string(i);
    s.capacity = std::round(392.3 / cid.project_years / 3.0 * 100.0) / 100.0;
    s.fixed_cost = 450.0;
    s.variable_cost = 8.0;
    cid.sinks.push_back(std::move(s));
  }
  cid.coordinates["snk0"] = {80.0, 420.0};
  cid.coordinates["snk1"] = {190.0, 260.0};
  cid.coordinates["snk2"] = {150.0, 60.0};  // southernmost storage site
  cid.failable_sink = "snk2";

  // Trunk junctions down the corridor, then pipes along a near-neighbor web.
  const int junction_count = 6;
  for (int i = 0; i < junction_count; ++i) {
    std::string id = "jct" + std::to_string(i);
    cid.junctions.push_back(id);
    cid.coordinates[id] = {rng.uniform_real(60.0, 240.0), 60.0 + 70.0 * i};
  }
  auto distance = [&](const std::string& a, const std::string& b) {
    const auto& pa = cid.coordinates.at(a);
    const auto& pb = cid.coordinates.at(b);
    return std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
  };
  auto add_pipe = [&](const std::string& tail, const std::string& head) {
    double km = distance(tail, head);
    CidPipe p;
    p.id = "pipe" + std::to_string(cid.pipes.size());
    p.tail = tail;
    p.head = head;
    p.capacity = 16.0;
    p.fixed_cost = std::round(km * 2.4 * 100.0) / 100.0;   // build cost scales with length
    p.variable_cost = std::round(km * 0.011 * 100.0) / 100.0;
    cid.pipes.push_back(std::move(p));
  };
  // Each source connects to its nearest junction; junctions form a chain;
  // each sink hangs off its two nearest junctions.
  for (const CidResource& s : cid.sources) {
    std::string best;
    double best_km = 0.0;
    for (const std::string& j : cid.junctions) {
      double km = distance(s.id, j);
      if (best.empty() || km < best_km) {
        best = j;
        best_km = km;
      }
    }
    add_pipe(s.id, best);
  }
  for (int i = 0; i + 1 < junction_count; ++i) {
    add_pipe(cid.junctions[static_cast<std::size_t>(i)],
             cid.junctions[static_cast<std::size_t>(i) + 1]);
    add_pipe(cid.junctions[static_cast<std::size_t>(i) + 1],
             cid.junctions[static_cast<std::size_t>(i)]);
  }
  for (const CidResource& s : cid.sinks) {
    std::vector<std::pair<double, std::string>> ranked;
    for (const std::string& j : cid.junctions) ranked.emplace_back(distance(s.id, j), j);
    std::sort(ranked.begin(), ranked.end());
    add_pipe(ranked[0].second, s.id);
    add_pipe(ranked[1].second, s.id);
  }
  return cid;
}

}  // namespace fcnf::gen
