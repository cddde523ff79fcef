#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcnf/formulation.hpp"
#include "fcnf/milp.hpp"
#include "fcnf/network.hpp"

namespace fcnf {

// The base problem admits no flow of the target value.
struct NoFlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The network minus the failable edge cannot carry the target, so no repair
// exists for any initial flow.
struct NoRepairError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A chained solve produced a result the previous one rules out; indicates a
// tolerance misconfiguration, not an input problem.
struct SolverInconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParetoPoint {
  int iteration = 0;
  FlowSolution initial;
  FlowSolution repaired;
  double initial_cost = 0.0;
  double repaired_cost = 0.0;
};

struct ParetoFront {
  std::vector<ParetoPoint> points;  // repaired cost strictly decreasing
  double epsilon = 0.0;
  double terminal_cost = 0.0;  // optimum with the failable edge removed
};

// Iteration 0: the cheapest initial flow paired with the cheapest repair over
// all minimum-cost initial flows.
ParetoPoint initial_point(const FlowNetwork& net, const PairedModelOptions& opts,
                          const SolverConfig& config = {});

// One iteration of the three-model chain. Returns nullopt (exhausted) when no
// repaired flow cheaper than `previous_repaired_cost - epsilon` exists.
std::optional<ParetoPoint> next_point(const FlowNetwork& net, const PairedModelOptions& opts,
                                      double previous_repaired_cost, double epsilon,
                                      int iteration, const SolverConfig& config = {});

// Full front from the minimum-cost flow down to the minimum-cost flow with
// the failable edge excluded. epsilon <= 0 selects the default step of
// 1e-4 * max(1, terminal cost).
ParetoFront pareto_front(const FlowNetwork& net, const PairedModelOptions& opts,
                         double epsilon = 0.0, const SolverConfig& config = {},
                         int max_iterations = 10000);

double default_epsilon(double terminal_cost);

nlohmann::json front_to_json(const ParetoFront& front);
ParetoFront front_from_json(const nlohmann::json& j);

// Plot-ready table with fixed columns `iteration,initial_cost,repaired_cost`.
std::string front_to_csv(const ParetoFront& front);

}  // namespace fcnf
