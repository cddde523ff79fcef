#include "fcnf/pareto.hpp"

#include <cmath>
#include <cstdio>

namespace fcnf {

namespace {

MilpResult solve_or_throw(const MilpModel& model, const SolverConfig& config,
                          const std::string& what) {
  MilpResult result = solve_milp(model, config);
  if (result.status == SolveStatus::IterationLimit || result.status == SolveStatus::Unbounded) {
    throw SolverInconsistencyError(what + " solve ended with status " +
                                   to_string(result.status));
  }
  return result;
}

ParetoPoint extract_point(const FlowNetwork& net, const MilpResult& result, int iteration) {
  ParetoPoint point;
  point.iteration = iteration;
  point.initial = extract_flow_solution(net, result.assignment, FlowRole::Initial);
  point.repaired = extract_flow_solution(net, result.assignment, FlowRole::Repaired);
  point.initial_cost = point.initial.cost;
  point.repaired_cost = point.repaired.cost;
  return point;
}

}  // namespace

double default_epsilon(double terminal_cost) {
  return 1e-4 * std::max(1.0, terminal_cost);
}

ParetoPoint initial_point(const FlowNetwork& net, const PairedModelOptions& opts,
                          const SolverConfig& config) {
  MilpResult base = solve_or_throw(base_fcnf_model(net), config, "base model");
  if (base.status == SolveStatus::Infeasible) {
    throw NoFlowError("no flow of value " + std::to_string(net.target) + " exists");
  }
  MilpResult paired =
      solve_or_throw(min_repair_cost_model(net, opts, base.objective_value), config,
                     "iteration-0 repair model");
  if (paired.status == SolveStatus::Infeasible) {
    throw NoRepairError("no repaired flow exists once edge '" + net.failable_edge +
                        "' is removed");
  }
  return extract_point(net, paired, 0);
}

std::optional<ParetoPoint> next_point(const FlowNetwork& net, const PairedModelOptions& opts,
                                      double previous_repaired_cost, double epsilon,
                                      int iteration, const SolverConfig& config) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  // Costs are nonnegative, so a cap below zero cannot be met.
  if (previous_repaired_cost - epsilon < 0.0) return std::nullopt;

  MilpResult capped = solve_or_throw(
      max_repair_cost_model(net, opts, previous_repaired_cost, epsilon), config,
      "max-repair-cost model");
  if (capped.status == SolveStatus::Infeasible) return std::nullopt;
  const double repaired_level = capped.objective_value;

  MilpResult cheapest_initial = solve_or_throw(
      min_initial_cost_model(net, opts, repaired_level), config, "min-initial-cost model");
  if (cheapest_initial.status == SolveStatus::Infeasible) {
    throw SolverInconsistencyError(
        "min-initial-cost model infeasible at a repaired cost the previous solve attained");
  }
  const double initial_level = cheapest_initial.objective_value;

  MilpResult settled = solve_or_throw(min_repair_cost_model(net, opts, initial_level), config,
                                      "min-repair-cost model");
  if (settled.status == SolveStatus::Infeasible) {
    throw SolverInconsistencyError(
        "min-repair-cost model infeasible at an initial cost the previous solve attained");
  }
  return extract_point(net, settled, iteration);
}

ParetoFront pareto_front(const FlowNetwork& net, const PairedModelOptions& opts, double epsilon,
                         const SolverConfig& config, int max_iterations) {
  MilpResult terminal =
      solve_or_throw(base_fcnf_model(net, /*exclude_failable=*/true), config, "terminal model");
  if (terminal.status == SolveStatus::Infeasible) {
    throw NoRepairError("network minus edge '" + net.failable_edge +
                        "' cannot carry the target flow");
  }
  ParetoFront front;
  front.terminal_cost = terminal.objective_value;
  front.epsilon = epsilon > 0.0 ? epsilon : default_epsilon(front.terminal_cost);

  front.points.push_back(initial_point(net, opts, config));
  bool exhausted = false;
  for (int iteration = 1; iteration <= max_iterations; ++iteration) {
    const double previous = front.points.back().repaired_cost;
    std::optional<ParetoPoint> point =
        next_point(net, opts, previous, front.epsilon, iteration, config);
    if (!point) {
      exhausted = true;
      break;
    }
    if (point->repaired_cost > previous - front.epsilon + 1e-6 * std::max(1.0, previous)) {
      throw SolverInconsistencyError("repaired cost failed to decrease by epsilon");
    }
    front.points.push_back(std::move(*point));
  }
  if (!exhausted) {
    throw SolverInconsistencyError("front did not terminate within the iteration cap");
  }
  const double scale = std::max(1.0, std::abs(front.terminal_cost));
  if (std::abs(front.points.back().repaired_cost - front.terminal_cost) > 1e-6 * scale) {
    throw SolverInconsistencyError(
        "last repaired cost does not match the failable-edge-deleted optimum");
  }
  return front;
}

nlohmann::json front_to_json(const ParetoFront& front) {
  nlohmann::json points = nlohmann::json::array();
  for (const ParetoPoint& p : front.points) {
    points.push_back({{"iteration", p.iteration},
                      {"initial_cost", p.initial_cost},
                      {"repaired_cost", p.repaired_cost},
                      {"initial", solution_to_json(p.initial)},
                      {"repaired", solution_to_json(p.repaired)}});
  }
  return {{"epsilon", front.epsilon},
          {"terminal_cost", front.terminal_cost},
          {"points", std::move(points)}};
}

ParetoFront front_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("front: top-level value must be an object");
  ParetoFront front;
  front.epsilon = j.at("epsilon").get<double>();
  front.terminal_cost = j.at("terminal_cost").get<double>();
  for (const nlohmann::json& jp : j.at("points")) {
    ParetoPoint p;
    p.iteration = jp.at("iteration").get<int>();
    p.initial_cost = jp.at("initial_cost").get<double>();
    p.repaired_cost = jp.at("repaired_cost").get<double>();
    p.initial = solution_from_json(jp.at("initial"));
    p.repaired = solution_from_json(jp.at("repaired"));
    front.points.push_back(std::move(p));
  }
  return front;
}

std::string front_to_csv(const ParetoFront& front) {
  std::string out = "iteration,initial_cost,repaired_cost\n";
  char line[128];
  for (const ParetoPoint& p : front.points) {
    std::snprintf(line, sizeof(line), "%d,%.6f,%.6f\n", p.iteration, p.initial_cost,
                  p.repaired_cost);
    out += line;
  }
  return out;
}

}  // namespace fcnf
