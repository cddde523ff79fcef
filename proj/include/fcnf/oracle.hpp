#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcnf/network.hpp"

// Brute-force ground truth for small instances. Nothing in this module calls
// the MILP solver; routing is done by successive shortest paths and open-set
// choices by exhaustive enumeration, so results are usable as an independent
// check of the optimization path.
namespace fcnf::oracle {

// Dominance comparisons on oracle cost pairs are near-exact path sums.
inline constexpr double kDominanceTolerance = 1e-9;
inline constexpr int kDefaultEdgeCap = 15;

struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OraclePair {
  double initial_cost = 0.0;
  double repaired_cost = 0.0;
  std::set<std::string> initial_open;  // witness open set for the initial flow
};

// Mutually non-dominated (initial_cost, repaired_cost) pairs sorted by
// increasing initial cost.
struct OracleFront {
  std::vector<OraclePair> pairs;
};

// Minimum-variable-cost flow of value `net.target` using only edges in
// `open_set` (minus the failable edge when flagged). The returned solution's
// open set is `open_set` as given and its cost includes every open fixed
// charge, used or not. Returns nullopt when the target is unreachable.
std::optional<FlowSolution> min_cost_flow_fixed_open(const FlowNetwork& net,
                                                     const std::set<std::string>& open_set,
                                                     bool exclude_failable);

// Cheapest cost of restoring a flow of value `net.target` after the failable
// edge is gone, given that `initial`'s fixed charges are already paid: the
// sunk charges plus the best supplemental open set and routing, found by
// enumerating supplements over the edges outside `initial.open`. Returns
// nullopt when the network minus the failable edge cannot carry the target.
std::optional<double> optimal_repair_cost(const FlowNetwork& net, const FlowSolution& initial);

// Enumerates every candidate initial open set, pairs it with its best initial
// cost and optimal repair cost, and dominance-filters the results. Refuses
// networks with more than `edge_cap` edges.
OracleFront brute_force_front(const FlowNetwork& net, int edge_cap = kDefaultEdgeCap);

// True iff pair (i1, r1) weakly dominates (i2, r2): no worse in both
// coordinates and strictly better in at least one, within `tol`.
bool dominates(double i1, double r1, double i2, double r2,
               double tol = kDominanceTolerance);

}  // namespace fcnf::oracle
