#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fcnf/formulation.hpp"
#include "fcnf/gen.hpp"
#include "fcnf/milp.hpp"
#include "fcnf/network.hpp"
#include "fcnf/oracle.hpp"
#include "test_helpers.hpp"

using namespace fcnf;

namespace {

std::set<std::string> all_edges(const FlowNetwork& net) {
  std::set<std::string> ids;
  for (const auto& e : net.edges) ids.insert(e.id);
  return ids;
}

// Exhaustive FCNF optimum: best fixed-open routing over every open subset.
double subset_enumeration_optimum(const FlowNetwork& net, bool exclude_failable) {
  std::vector<std::string> ids(all_edges(net).begin(), all_edges(net).end());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << ids.size()); ++mask) {
    std::set<std::string> open;
    for (std::size_t b = 0; b < ids.size(); ++b) {
      if (mask & (1u << b)) open.insert(ids[b]);
    }
    if (exclude_failable && open.count(net.failable_edge)) continue;
    if (auto sol = oracle::min_cost_flow_fixed_open(net, open, exclude_failable)) {
      best = std::min(best, sol->cost);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("base model: forced single path") {
  FlowNetwork net;
  net.vertices = {"s", "t"};
  net.edges = {{"e0", "s", "t", 10.0, 5.0, 1.0}};
  net.source = "s";
  net.sink = "t";
  net.target = 4.0;
  net.failable_edge = "e0";
  MilpResult r = solve_milp(base_fcnf_model(net));
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective_value == doctest::Approx(9.0));  // 5 fixed + 4 flow
}

TEST_CASE("base model: zero target costs nothing and opens nothing") {
  FlowNetwork net = testing::fig1_analogue_network();
  net.target = 0.0;
  MilpResult r = solve_milp(base_fcnf_model(net));
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective_value == doctest::Approx(0.0));
  for (const auto& [name, value] : r.assignment) {
    if (name.rfind("y(", 0) == 0) CHECK(value == doctest::Approx(0.0));
  }
}

TEST_CASE("base model matches subset enumeration on random nets") {
  gen::NetworkGenParams p;
  p.min_edges = 8;
  p.max_edges = 8;
  for (std::uint64_t seed = 600; seed < 612; ++seed) {
    FlowNetwork net = gen::random_network(seed, p);
    MilpResult r = solve_milp(base_fcnf_model(net));
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value ==
          doctest::Approx(subset_enumeration_optimum(net, false)).epsilon(1e-9));
    MilpResult excl = solve_milp(base_fcnf_model(net, true));
    REQUIRE(excl.status == SolveStatus::Optimal);
    CHECK(excl.objective_value ==
          doctest::Approx(subset_enumeration_optimum(net, true)).epsilon(1e-9));
  }
}

TEST_CASE("base model faults on invalid networks") {
  FlowNetwork net = testing::fig1_analogue_network();
  net.failable_edge = "missing";
  CHECK_THROWS_AS(base_fcnf_model(net), std::invalid_argument);
}

TEST_CASE("paired model: all-open assignment avoiding the failable edge is feasible") {
  FlowNetwork net = testing::fig1_analogue_network();
  MilpModel model = paired_model(net, {});
  MilpResult r = solve_milp(model);
  REQUIRE(r.status == SolveStatus::Optimal);  // any feasible point works

  // Same common flow on both roles, everything open: every constraint holds.
  auto routed = oracle::min_cost_flow_fixed_open(net, all_edges(net), true);
  REQUIRE(routed.has_value());
  std::map<std::string, double> assignment;
  for (const DirectedEdge& e : net.edges) {
    assignment[open_var_name(FlowRole::Initial, e.id)] = 1.0;
    assignment[open_var_name(FlowRole::Repaired, e.id)] = 1.0;
    assignment[flow_var_name(FlowRole::Initial, e.id)] = routed->flow.at(e.id);
    assignment[flow_var_name(FlowRole::Repaired, e.id)] = routed->flow.at(e.id);
  }
  CHECK(testing::constraint_violation(model, assignment) <= 1e-9);
}

TEST_CASE("paired model: infeasible when the only route uses the failable edge") {
  FlowNetwork net;
  net.vertices = {"s", "t"};
  net.edges = {{"e0", "s", "t", 5.0, 1.0, 0.0}};
  net.source = "s";
  net.sink = "t";
  net.target = 1.0;
  net.failable_edge = "e0";
  CHECK(solve_milp(paired_model(net, {})).status == SolveStatus::Infeasible);
  net.target = 0.0;  // nothing to route, nothing fails
  CHECK(solve_milp(paired_model(net, {})).status == SolveStatus::Optimal);
}

TEST_CASE("paired model: oracle-computed pair satisfies the constraints") {
  FlowNetwork net = testing::fig1_analogue_network();
  auto initial = oracle::min_cost_flow_fixed_open(net, {"sb", "bt"}, false);
  REQUIRE(initial.has_value());
  CHECK(initial->cost == doctest::Approx(9.0));
  // Cheapest repair keeps the sunk route and adds the safe chain.
  std::set<std::string> repaired_open = {"sb", "bt", "sm1", "m1m2", "m2t"};
  auto repaired = oracle::min_cost_flow_fixed_open(net, repaired_open, true);
  REQUIRE(repaired.has_value());
  CHECK(repaired->cost == doctest::Approx(oracle::optimal_repair_cost(net, *initial).value()));

  MilpModel model = paired_model(net, {});
  std::map<std::string, double> assignment;
  for (const DirectedEdge& e : net.edges) {
    assignment[open_var_name(FlowRole::Initial, e.id)] = initial->open.count(e.id) ? 1.0 : 0.0;
    assignment[open_var_name(FlowRole::Repaired, e.id)] = repaired_open.count(e.id) ? 1.0 : 0.0;
    auto it = initial->flow.find(e.id);
    assignment[flow_var_name(FlowRole::Initial, e.id)] =
        it == initial->flow.end() ? 0.0 : it->second;
    auto rt = repaired->flow.find(e.id);
    assignment[flow_var_name(FlowRole::Repaired, e.id)] =
        rt == repaired->flow.end() ? 0.0 : rt->second;
  }
  CHECK(testing::constraint_violation(model, assignment) <= 1e-9);
}

TEST_CASE("paired model counts: 4|E| variables and the documented constraint total") {
  for (std::uint64_t seed : {21ULL, 22ULL}) {
    FlowNetwork net = gen::random_network(seed);
    PairedModelOptions opts;
    SUBCASE("with a locked edge") {
      opts.lock_source_flows = true;
      opts.locked_edges = {net.edges.front().id};
    }
    SUBCASE("without locks") {}
    MilpModel model = paired_model(net, opts);
    const std::size_t edge_count = net.edges.size();
    CHECK(model.variables().size() == 4 * edge_count);
    std::set<std::string> touched;  // internal vertices with incident edges
    for (const DirectedEdge& e : net.edges) {
      if (e.tail != net.source && e.tail != net.sink) touched.insert(e.tail);
      if (e.head != net.source && e.head != net.sink) touched.insert(e.head);
    }
    const std::size_t expected = 2 * (edge_count + touched.size() + 1)  // validity blocks
                                 + 1                                    // failed-edge zero flow
                                 + edge_count                           // keep-open coupling
                                 + opts.locked_edges.size();
    CHECK(model.constraints().size() == expected);
  }
}

TEST_CASE("paired model faults on unknown locked edges") {
  FlowNetwork net = testing::fig1_analogue_network();
  PairedModelOptions opts;
  opts.lock_source_flows = true;
  opts.locked_edges = {"nonsense"};
  CHECK_THROWS_AS(paired_model(net, opts), std::invalid_argument);
}

TEST_CASE("max-repair-cost model validates its scalar inputs") {
  FlowNetwork net = testing::fig1_analogue_network();
  CHECK_THROWS_AS(max_repair_cost_model(net, {}, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(max_repair_cost_model(net, {}, 10.0, 0.0), std::invalid_argument);
}

TEST_CASE("max-repair-cost model: cap below the cheapest repair is the termination signal") {
  FlowNetwork net = testing::fig1_analogue_network();
  // Cheapest possible repaired cost is the safe chain at 12.
  CHECK(solve_milp(max_repair_cost_model(net, {}, 12.0, 0.5)).status == SolveStatus::Infeasible);
}

TEST_CASE("max-repair-cost model inflates under a loose cap") {
  FlowNetwork net = testing::fig1_analogue_network();
  MilpResult r = solve_milp(max_repair_cost_model(net, {}, 1e6, 1.0));
  REQUIRE(r.status == SolveStatus::Optimal);
  // Opening every edge is the priciest repair: total fixed charge 24.
  CHECK(r.objective_value == doctest::Approx(24.0));
  auto min_repair = oracle::optimal_repair_cost(
      net, *oracle::min_cost_flow_fixed_open(net, {"sb", "bt"}, false));
  CHECK(r.objective_value > min_repair.value());
}

TEST_CASE("iteration 1 chain on the committed instance") {
  FlowNetwork net = testing::fig1_analogue_network();
  // Iteration 0 pair costs (9, 21); the subset-sum enumeration over the four
  // off-chain edges makes 20 the dearest repair under the 20.5 cap.
  MilpResult step1 = solve_milp(max_repair_cost_model(net, {}, 21.0, 0.5));
  REQUIRE(step1.status == SolveStatus::Optimal);
  CHECK(step1.objective_value == doctest::Approx(20.0));
  CHECK(step1.objective_value < 21.0);

  MilpResult step2 = solve_milp(min_initial_cost_model(net, {}, step1.objective_value));
  REQUIRE(step2.status == SolveStatus::Optimal);
  CHECK(step2.objective_value == doctest::Approx(10.0));  // s -> m1 -> b -> t

  MilpResult step3 = solve_milp(min_repair_cost_model(net, {}, step2.objective_value));
  REQUIRE(step3.status == SolveStatus::Optimal);
  CHECK(step3.objective_value == doctest::Approx(19.0));
  CHECK(step3.objective_value <= step1.objective_value + 1e-9);  // inflation removed
}

TEST_CASE("min-initial-cost at the cheapest repair level forces the safe route") {
  FlowNetwork net = testing::fig1_analogue_network();
  MilpResult terminal = solve_milp(base_fcnf_model(net, true));
  REQUIRE(terminal.status == SolveStatus::Optimal);
  CHECK(terminal.objective_value == doctest::Approx(12.0));
  MilpResult r = solve_milp(min_initial_cost_model(net, {}, terminal.objective_value));
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective_value == doctest::Approx(terminal.objective_value));
}

TEST_CASE("min-repair-cost at the base optimum equals the best repair over min-cost flows") {
  FlowNetwork net = testing::fig1_analogue_network();
  MilpResult base = solve_milp(base_fcnf_model(net));
  REQUIRE(base.status == SolveStatus::Optimal);
  CHECK(base.objective_value == doctest::Approx(9.0));
  MilpResult r = solve_milp(min_repair_cost_model(net, {}, base.objective_value));
  REQUIRE(r.status == SolveStatus::Optimal);
  auto repair = oracle::optimal_repair_cost(
      net, *oracle::min_cost_flow_fixed_open(net, {"sb", "bt"}, false));
  CHECK(r.objective_value == doctest::Approx(repair.value()));  // 21
}

TEST_CASE("extracted solutions are valid flows forming a repair pair") {
  for (std::uint64_t seed = 700; seed < 712; ++seed) {
    FlowNetwork net = gen::random_network(seed);
    MilpResult base = solve_milp(base_fcnf_model(net));
    REQUIRE(base.status == SolveStatus::Optimal);
    MilpResult r = solve_milp(min_repair_cost_model(net, {}, base.objective_value));
    REQUIRE(r.status == SolveStatus::Optimal);
    FlowSolution initial = extract_flow_solution(net, r.assignment, FlowRole::Initial);
    FlowSolution repaired = extract_flow_solution(net, r.assignment, FlowRole::Repaired);
    CHECK(is_valid_flow(net, initial, false));
    CHECK(is_valid_flow(net, repaired, true));
    CHECK(check_repair_pair(net, initial, repaired));
    // Abandoned-edge cost floor: the repair pays at least the fixed charges
    // of initially opened edges it no longer uses.
    double abandoned = 0.0;
    for (const std::string& id : initial.open) {
      auto it = repaired.flow.find(id);
      if (it == repaired.flow.end() || it->second <= kFlowTolerance) {
        abandoned += net.find_edge(id)->fixed_cost;
      }
    }
    CHECK(repaired.cost >= abandoned - 1e-9);
  }
}

TEST_CASE("capture locking holds per locked edge in solved models") {
  gen::CidGenParams p;
  for (std::uint64_t seed = 50; seed < 56; ++seed) {
    CidInstance cid = gen::random_cid(seed, p);
    CidReduction red = reduce_cid_to_fcnf(annualize_costs(cid));
    PairedModelOptions opts;
    opts.lock_source_flows = true;
    opts.locked_edges = {red.super_source_edges.begin(), red.super_source_edges.end()};
    MilpResult base = solve_milp(base_fcnf_model(red.network));
    REQUIRE(base.status == SolveStatus::Optimal);
    MilpResult r = solve_milp(min_repair_cost_model(red.network, opts, base.objective_value));
    if (r.status != SolveStatus::Optimal) continue;  // lock can make repair infeasible
    for (const std::string& id : red.super_source_edges) {
      double fi = r.assignment.at(flow_var_name(FlowRole::Initial, id));
      double fr = r.assignment.at(flow_var_name(FlowRole::Repaired, id));
      CHECK(fi == doctest::Approx(fr).epsilon(1e-6));
    }
  }
}

TEST_CASE("initial-role slice of the paired model reproduces the base optimum") {
  for (std::uint64_t seed : {33ULL, 34ULL, 35ULL}) {
    FlowNetwork net = gen::random_network(seed);
    MilpModel paired = paired_model(net, {});
    MilpModel sliced;
    for (const MilpVariable& v : paired.variables()) {
      if (v.name.rfind("yi(", 0) == 0) {
        sliced.add_binary(v.name);
      } else if (v.name.rfind("fi(", 0) == 0) {
        sliced.add_continuous(v.name, v.lower, v.upper);
      }
    }
    for (const MilpConstraint& c : paired.constraints()) {
      bool initial_only = c.name.rfind("capi(", 0) == 0 || c.name.rfind("bali(", 0) == 0 ||
                          c.name == "tgti";
      if (!initial_only) continue;
      std::vector<std::pair<int, double>> terms;
      for (const auto& [index, coeff] : c.terms) {
        terms.emplace_back(
            sliced.variable_index(paired.variables()[static_cast<std::size_t>(index)].name),
            coeff);
      }
      sliced.add_constraint(c.name, std::move(terms), c.sense, c.rhs);
    }
    std::vector<std::pair<int, double>> objective;
    for (const DirectedEdge& e : net.edges) {
      objective.emplace_back(sliced.variable_index(open_var_name(FlowRole::Initial, e.id)),
                             e.fixed_cost);
      objective.emplace_back(sliced.variable_index(flow_var_name(FlowRole::Initial, e.id)),
                             e.variable_cost);
    }
    sliced.set_objective(ObjectiveSense::Minimize, objective);
    MilpResult from_slice = solve_milp(sliced);
    MilpResult from_base = solve_milp(base_fcnf_model(net));
    REQUIRE(from_slice.status == from_base.status);
    if (from_base.status == SolveStatus::Optimal) {
      CHECK(from_slice.objective_value ==
            doctest::Approx(from_base.objective_value).epsilon(1e-9));
    }
  }
}
