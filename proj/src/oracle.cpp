#include "fcnf/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

namespace fcnf::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualTol = 1e-12;  // smallest residual treated as usable
constexpr double kValueTol = 1e-9;      // slack when comparing pushed flow to the target

struct RouteResult {
  double variable_cost = 0.0;
  std::vector<double> edge_flow;  // indexed like net.edges
};

// Successive-shortest-path min-cost flow over a fixed usable edge set.
// Variable costs are nonnegative, but residual arcs are not, so path finding
// uses plain Bellman-Ford; instances here are small by contract.
class Router {
 public:
  explicit Router(const FlowNetwork& net) : net_(net) {
    for (std::size_t i = 0; i < net.vertices.size(); ++i) {
      vertex_index_[net.vertices[i]] = static_cast<int>(i);
    }
    n_ = static_cast<int>(net.vertices.size());
    source_ = vertex_index_.at(net.source);
    sink_ = vertex_index_.at(net.sink);
    for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) {
      const DirectedEdge& ed = net.edges[e];
      int v = vertex_index_.at(ed.head);
      int u = vertex_index_.at(ed.tail);
      arcs_.push_back(Arc{v, e, ed.capacity, ed.variable_cost});
      arcs_.push_back(Arc{u, e, 0.0, -ed.variable_cost});
    }
  }

  // Minimum variable cost of a flow of value net.target restricted to edges
  // with allowed[e] set; nullopt when that much flow cannot be routed.
  std::optional<RouteResult> route(const std::vector<char>& allowed) const {
    std::vector<double> flow(arcs_.size(), 0.0);
    const double target = net_.target;
    double pushed = 0.0;
    int guard = 0;
    while (pushed < target - kValueTol) {
      if (++guard > 100000) {
        throw std::logic_error("oracle routing failed to converge");
      }
      std::vector<double> dist(n_, kInf);
      std::vector<int> parent_arc(n_, -1);
      dist[source_] = 0.0;
      for (int round = 0; round < n_; ++round) {
        bool changed = false;
        for (int a = 0; a < static_cast<int>(arcs_.size()); ++a) {
          const Arc& arc = arcs_[a];
          if (!allowed[arc.edge]) continue;
          double residual = arc.capacity - flow[a];
          if (residual <= kResidualTol) continue;
          int from = tail_of(a);
          if (dist[from] == kInf) continue;
          double candidate = dist[from] + arc.cost;
          if (candidate < dist[arc.to] - 1e-15) {
            dist[arc.to] = candidate;
            parent_arc[arc.to] = a;
            changed = true;
          }
        }
        if (!changed) break;
      }
      if (dist[sink_] == kInf) return std::nullopt;
      double bottleneck = target - pushed;
      for (int v = sink_; v != source_;) {
        int a = parent_arc[v];
        bottleneck = std::min(bottleneck, arcs_[a].capacity - flow[a]);
        v = tail_of(a);
      }
      for (int v = sink_; v != source_;) {
        int a = parent_arc[v];
        flow[a] += bottleneck;
        flow[a ^ 1] -= bottleneck;
        v = tail_of(a);
      }
      pushed += bottleneck;
    }
    RouteResult result;
    result.edge_flow.assign(net_.edges.size(), 0.0);
    for (std::size_t a = 0; a < arcs_.size(); a += 2) {
      double f = std::max(flow[a], 0.0);
      result.edge_flow[arcs_[a].edge] = f;
      result.variable_cost += f * arcs_[a].cost;
    }
    return result;
  }

 private:
  struct Arc {
    int to;
    int edge;
    double capacity;
    double cost;
  };

  // Arcs are stored in pairs (forward, backward); the partner's head is the tail.
  int tail_of(int a) const { return arcs_[a ^ 1].to; }

  const FlowNetwork& net_;
  int n_ = 0;
  int source_ = 0;
  int sink_ = 0;
  std::map<std::string, int> vertex_index_;
  std::vector<Arc> arcs_;
};

double fixed_cost_of(const FlowNetwork& net, const std::set<std::string>& open_set) {
  double total = 0.0;
  for (const std::string& id : open_set) {
    const DirectedEdge* e = net.find_edge(id);
    if (e == nullptr) throw UnknownEdgeError(id);
    total += e->fixed_cost;
  }
  return total;
}

}  // namespace

bool dominates(double i1, double r1, double i2, double r2, double tol) {
  return i1 <= i2 + tol && r1 <= r2 + tol && (i1 < i2 - tol || r1 < r2 - tol);
}

std::optional<FlowSolution> min_cost_flow_fixed_open(const FlowNetwork& net,
                                                     const std::set<std::string>& open_set,
                                                     bool exclude_failable) {
  double fixed_part = fixed_cost_of(net, open_set);  // validates the ids
  std::vector<char> allowed(net.edges.size(), 0);
  for (const std::string& id : open_set) {
    int idx = net.edge_index(id);
    if (!(exclude_failable && id == net.failable_edge)) {
      allowed[static_cast<std::size_t>(idx)] = 1;
    }
  }
  Router router(net);
  std::optional<RouteResult> routed = router.route(allowed);
  if (!routed) return std::nullopt;
  FlowSolution sol;
  sol.open = open_set;
  for (const std::string& id : open_set) {
    sol.flow[id] = routed->edge_flow[static_cast<std::size_t>(net.edge_index(id))];
  }
  sol.cost = fixed_part + routed->variable_cost;
  return sol;
}

std::optional<double> optimal_repair_cost(const FlowNetwork& net, const FlowSolution& initial) {
  double sunk = fixed_cost_of(net, initial.open);
  int fail_idx = net.edge_index(net.failable_edge);

  std::vector<char> base(net.edges.size(), 0);
  for (const std::string& id : initial.open) {
    base[static_cast<std::size_t>(net.edge_index(id))] = 1;
  }
  if (fail_idx >= 0) base[static_cast<std::size_t>(fail_idx)] = 0;

  // Supplemental candidates: closed edges other than the failed one.
  std::vector<int> candidates;
  for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) {
    if (e != fail_idx && !initial.open.count(net.edges[e].id)) candidates.push_back(e);
  }
  if (candidates.size() > 20) {
    throw CapExceededError("optimal_repair_cost: " + std::to_string(candidates.size()) +
                           " non-initial edges exceed the enumeration cap of 20");
  }

  Router router(net);
  {
    std::vector<char> everything = base;
    for (int e : candidates) everything[static_cast<std::size_t>(e)] = 1;
    if (!router.route(everything)) return std::nullopt;
  }

  // Cut-capacity pruning: any supplement whose usable edges leaving the
  // source or entering the sink cannot carry the target is infeasible.
  auto cut_capacity = [&](const std::vector<char>& allowed, bool at_source) {
    double total = 0.0;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      if (!allowed[e]) continue;
      if (at_source ? net.edges[e].tail == net.source : net.edges[e].head == net.sink) {
        total += net.edges[e].capacity;
      }
    }
    return total;
  };

  double best = kInf;
  const auto k = static_cast<std::uint32_t>(candidates.size());
  std::vector<char> allowed(net.edges.size(), 0);
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    allowed = base;
    double supplement_fixed = 0.0;
    for (std::uint32_t bit = 0; bit < k; ++bit) {
      if (mask & (1u << bit)) {
        int e = candidates[bit];
        allowed[static_cast<std::size_t>(e)] = 1;
        supplement_fixed += net.edges[static_cast<std::size_t>(e)].fixed_cost;
      }
    }
    if (supplement_fixed >= best) continue;
    if (cut_capacity(allowed, true) < net.target - kValueTol) continue;
    if (cut_capacity(allowed, false) < net.target - kValueTol) continue;
    if (std::optional<RouteResult> routed = router.route(allowed)) {
      best = std::min(best, supplement_fixed + routed->variable_cost);
    }
  }
  if (best == kInf) return std::nullopt;
  return sunk + best;
}

OracleFront brute_force_front(const FlowNetwork& net, int edge_cap) {
  const int edge_count = static_cast<int>(net.edges.size());
  if (edge_count > edge_cap) {
    throw CapExceededError("brute_force_front: " + std::to_string(edge_count) +
                           " edges exceed the cap of " + std::to_string(edge_cap));
  }
  const std::uint32_t full = edge_count == 0 ? 0 : (1u << edge_count) - 1;
  int fail_idx = net.edge_index(net.failable_edge);
  const std::uint32_t fail_bit = fail_idx >= 0 ? (1u << fail_idx) : 0;

  // Per-mask fixed-charge sums, filled by peeling the lowest set bit.
  std::vector<double> fixed_sum(full + 1, 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t low = mask & (~mask + 1);
    int idx = std::countr_zero(low);
    fixed_sum[mask] = fixed_sum[mask ^ low] + net.edges[static_cast<std::size_t>(idx)].fixed_cost;
  }

  Router router(net);
  // Lazily memoized min variable routing cost per usable-edge mask;
  // NaN = not computed yet, -1 = infeasible.
  std::vector<double> route_memo(full + 1, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> allowed(net.edges.size(), 0);
  auto route_cost = [&](std::uint32_t mask) -> double {
    double& slot = route_memo[mask];
    if (!std::isnan(slot)) return slot;
    for (int e = 0; e < edge_count; ++e) allowed[static_cast<std::size_t>(e)] = (mask >> e) & 1;
    std::optional<RouteResult> routed = router.route(allowed);
    slot = routed ? routed->variable_cost : -1.0;
    return slot;
  };

  struct Candidate {
    double initial_cost;
    double repaired_cost;
    std::uint32_t open_mask;
  };
  std::vector<Candidate> candidates;
  for (std::uint32_t open = 0;; ++open) {
    double initial_route = route_cost(open);
    if (initial_route >= 0.0) {
      double initial_cost = fixed_sum[open] + initial_route;
      // Best repair: cheapest supplement among closed, non-failed edges.
      std::uint32_t pool = ~open & full & ~fail_bit;
      double best = kInf;
      for (std::uint32_t sub = pool;; sub = (sub - 1) & pool) {
        double rc = route_cost((open | sub) & ~fail_bit);
        if (rc >= 0.0) best = std::min(best, fixed_sum[sub] + rc);
        if (sub == 0) break;
      }
      if (best < kInf) {
        candidates.push_back({initial_cost, fixed_sum[open] + best, open});
      }
    }
    if (open == full) break;
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.initial_cost != b.initial_cost) return a.initial_cost < b.initial_cost;
    if (a.repaired_cost != b.repaired_cost) return a.repaired_cost < b.repaired_cost;
    if (std::popcount(a.open_mask) != std::popcount(b.open_mask)) {
      return std::popcount(a.open_mask) < std::popcount(b.open_mask);
    }
    return a.open_mask < b.open_mask;
  });

  // Staircase sweep knocks out the bulk, then an exact pass settles pairs
  // that straddle the tolerance.
  std::vector<Candidate> kept;
  double best_repaired = kInf;
  for (const Candidate& c : candidates) {
    if (!kept.empty() && std::abs(c.initial_cost - kept.back().initial_cost) <= kDominanceTolerance &&
        std::abs(c.repaired_cost - kept.back().repaired_cost) <= kDominanceTolerance) {
      continue;  // duplicate cost pair, first witness wins
    }
    if (c.repaired_cost < best_repaired - kDominanceTolerance) {
      kept.push_back(c);
      best_repaired = c.repaired_cost;
    }
  }
  OracleFront front;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < kept.size() && !dominated; ++j) {
      if (i != j && dominates(kept[j].initial_cost, kept[j].repaired_cost, kept[i].initial_cost,
                              kept[i].repaired_cost)) {
        dominated = true;
      }
    }
    if (dominated) continue;
    OraclePair pair;
    pair.initial_cost = kept[i].initial_cost;
    pair.repaired_cost = kept[i].repaired_cost;
    for (int e = 0; e < edge_count; ++e) {
      if (kept[i].open_mask & (1u << e)) pair.initial_open.insert(net.edges[static_cast<std::size_t>(e)].id);
    }
    front.pairs.push_back(std::move(pair));
  }
  return front;
}

}  // namespace fcnf::oracle
