#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcnf/gen.hpp"
#include "fcnf/network.hpp"
#include "fcnf/oracle.hpp"

using namespace fcnf;

namespace {

FlowNetwork single_edge_net(double target = 3.0) {
  FlowNetwork net;
  net.vertices = {"s", "t"};
  net.edges = {{"e0", "s", "t", 10.0, 5.0, 2.0}};
  net.source = "s";
  net.sink = "t";
  net.target = target;
  net.failable_edge = "e0";
  return net;
}

// Two disjoint routes; the cheaper one carries the failable edge.
FlowNetwork two_path_net() {
  FlowNetwork net;
  net.vertices = {"s", "a", "b", "t"};
  net.edges = {{"sa", "s", "a", 2.0, 1.0, 0.0}, {"at", "a", "t", 2.0, 2.0, 0.0},
               {"sb", "s", "b", 2.0, 4.0, 0.0}, {"bt", "b", "t", 2.0, 4.0, 0.0}};
  net.source = "s";
  net.sink = "t";
  net.target = 1.0;
  net.failable_edge = "at";
  return net;
}

std::set<std::string> all_edges(const FlowNetwork& net) {
  std::set<std::string> ids;
  for (const auto& e : net.edges) ids.insert(e.id);
  return ids;
}

}  // namespace

TEST_CASE("fixed-open routing on a single adequate edge") {
  FlowNetwork net = single_edge_net();
  auto sol = oracle::min_cost_flow_fixed_open(net, {"e0"}, false);
  REQUIRE(sol.has_value());
  CHECK(sol->flow.at("e0") == doctest::Approx(3.0));
  CHECK(sol->cost == doctest::Approx(5.0 + 2.0 * 3.0));
  CHECK(is_valid_flow(net, *sol, false));
}

TEST_CASE("fixed-open routing with an empty open set is infeasible for positive targets") {
  CHECK_FALSE(oracle::min_cost_flow_fixed_open(single_edge_net(), {}, false).has_value());
  CHECK(oracle::min_cost_flow_fixed_open(single_edge_net(0.0), {}, false).has_value());
}

TEST_CASE("fixed-open routing respects the failable-edge exclusion") {
  FlowNetwork net = single_edge_net();
  CHECK_FALSE(oracle::min_cost_flow_fixed_open(net, {"e0"}, true).has_value());
}

TEST_CASE("fixed-open routing faults on unknown edge ids") {
  CHECK_THROWS_AS(oracle::min_cost_flow_fixed_open(single_edge_net(), {"zzz"}, false),
                  UnknownEdgeError);
}

TEST_CASE("routing picks cheaper variable-cost splits") {
  FlowNetwork net;
  net.vertices = {"s", "a", "t"};
  net.edges = {{"sa", "s", "a", 4.0, 0.0, 1.0},
               {"at", "a", "t", 4.0, 0.0, 1.0},
               {"st", "s", "t", 1.0, 0.0, 1.0}};
  net.source = "s";
  net.sink = "t";
  net.target = 2.0;
  net.failable_edge = "st";
  auto sol = oracle::min_cost_flow_fixed_open(net, all_edges(net), false);
  REQUIRE(sol.has_value());
  // One unit on the direct edge (cost 1), one through the middle (cost 2).
  CHECK(sol->cost == doctest::Approx(3.0));
  CHECK(sol->flow.at("st") == doctest::Approx(1.0));
}

TEST_CASE("full-open routing is a lower bound on variable cost plus all charges") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FlowNetwork net = gen::random_network(seed);
    auto sol = oracle::min_cost_flow_fixed_open(net, all_edges(net), false);
    REQUIRE(sol.has_value());
    double all_fixed = 0.0;
    for (const auto& e : net.edges) all_fixed += e.fixed_cost;
    // Any subset's routing cannot beat the full set's variable optimum.
    for (std::uint64_t k = 0; k < 3; ++k) {
      std::set<std::string> subset;
      for (const auto& e : net.edges) {
        if ((gen::Rng(seed * 97 + k * 13 + e.id.size()).next_u64() & 1) != 0u) subset.insert(e.id);
      }
      auto sub = oracle::min_cost_flow_fixed_open(net, subset, false);
      if (sub.has_value()) {
        double sub_fixed = 0.0;
        for (const auto& id : subset) sub_fixed += net.find_edge(id)->fixed_cost;
        CHECK(sub->cost - sub_fixed >= sol->cost - all_fixed - 1e-9);
      }
    }
  }
}

TEST_CASE("repair of a flow that avoids the failable edge costs nothing extra") {
  FlowNetwork net = two_path_net();
  net.failable_edge = "sb";  // the expensive route fails instead
  auto initial = oracle::min_cost_flow_fixed_open(net, {"sa", "at"}, false);
  REQUIRE(initial.has_value());
  auto repair = oracle::optimal_repair_cost(net, *initial);
  REQUIRE(repair.has_value());
  CHECK(*repair == doctest::Approx(initial->cost));
}

TEST_CASE("repair across a forced bridge pays the full alternative route") {
  FlowNetwork net = two_path_net();
  auto initial = oracle::min_cost_flow_fixed_open(net, {"sa", "at"}, false);
  REQUIRE(initial.has_value());
  auto repair = oracle::optimal_repair_cost(net, *initial);
  REQUIRE(repair.has_value());
  // Sunk 3 for the initial route plus the full 8 for the alternative.
  CHECK(*repair == doctest::Approx(11.0));
}

TEST_CASE("repair reports infeasibility when no alternative exists") {
  FlowNetwork net = single_edge_net();
  auto initial = oracle::min_cost_flow_fixed_open(net, {"e0"}, false);
  REQUIRE(initial.has_value());
  CHECK_FALSE(oracle::optimal_repair_cost(net, *initial).has_value());
}

TEST_CASE("front of a single-path network has one pair") {
  FlowNetwork net = single_edge_net();
  net.edges.push_back({"e1", "s", "t", 10.0, 9.0, 2.0});
  net.failable_edge = "e1";  // failure of the pricier parallel edge is harmless
  auto front = oracle::brute_force_front(net);
  REQUIRE(front.pairs.size() == 1);
  CHECK(front.pairs[0].initial_cost == doctest::Approx(11.0));
  CHECK(front.pairs[0].repaired_cost == doctest::Approx(11.0));
}

TEST_CASE("front of two disjoint routes with the cheap one failable has two pairs") {
  auto front = oracle::brute_force_front(two_path_net());
  REQUIRE(front.pairs.size() == 2);
  CHECK(front.pairs[0].initial_cost == doctest::Approx(3.0));
  CHECK(front.pairs[0].repaired_cost == doctest::Approx(11.0));
  CHECK(front.pairs[1].initial_cost == doctest::Approx(8.0));
  CHECK(front.pairs[1].repaired_cost == doctest::Approx(8.0));
  CHECK(front.pairs[0].initial_open == std::set<std::string>{"sa", "at"});
}

TEST_CASE("front pairs are sorted, mutually non-dominated, and anchored") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    FlowNetwork net = gen::random_network(seed);
    auto front = oracle::brute_force_front(net);
    REQUIRE(!front.pairs.empty());
    for (std::size_t i = 0; i < front.pairs.size(); ++i) {
      for (std::size_t j = 0; j < front.pairs.size(); ++j) {
        if (i == j) continue;
        CHECK_FALSE(oracle::dominates(front.pairs[i].initial_cost, front.pairs[i].repaired_cost,
                                      front.pairs[j].initial_cost, front.pairs[j].repaired_cost));
      }
      if (i > 0) {
        CHECK(front.pairs[i].initial_cost > front.pairs[i - 1].initial_cost);
        CHECK(front.pairs[i].repaired_cost < front.pairs[i - 1].repaired_cost);
      }
    }
    // Last pair: repairing costs nothing beyond the initial build.
    CHECK(front.pairs.back().initial_cost == doctest::Approx(front.pairs.back().repaired_cost));
    // First pair: the globally cheapest initial flow with its best repair.
    auto best_initial = oracle::min_cost_flow_fixed_open(net, all_edges(net), false);
    REQUIRE(best_initial.has_value());
    double best = 1e300;
    auto ids = all_edges(net);
    std::vector<std::string> id_list(ids.begin(), ids.end());
    for (std::uint32_t mask = 0; mask < (1u << id_list.size()); ++mask) {
      std::set<std::string> open;
      for (std::size_t b = 0; b < id_list.size(); ++b) {
        if (mask & (1u << b)) open.insert(id_list[b]);
      }
      auto sol = oracle::min_cost_flow_fixed_open(net, open, false);
      if (sol.has_value()) best = std::min(best, sol->cost);
    }
    CHECK(front.pairs[0].initial_cost == doctest::Approx(best));
  }
}

TEST_CASE("brute_force_front refuses oversized instances") {
  FlowNetwork net;
  net.source = "s";
  net.sink = "t";
  net.target = 1.0;
  net.vertices = {"s", "t"};
  for (int i = 0; i < 16; ++i) {
    net.edges.push_back({"e" + std::to_string(i), "s", "t", 1.0, 1.0, 0.0});
  }
  net.failable_edge = "e0";
  CHECK_THROWS_AS(oracle::brute_force_front(net), oracle::CapExceededError);
  CHECK_NOTHROW(oracle::brute_force_front(net, 16));
}

TEST_CASE("dominance comparison respects the tolerance") {
  CHECK(oracle::dominates(1.0, 2.0, 1.0, 3.0));
  CHECK(oracle::dominates(1.0, 2.0, 2.0, 2.0));
  CHECK_FALSE(oracle::dominates(1.0, 2.0, 1.0 + 1e-12, 2.0 - 1e-12));  // tie within tol
  CHECK_FALSE(oracle::dominates(1.0, 3.0, 2.0, 2.0));                  // trade-off
}
