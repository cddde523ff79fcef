#pragma once

#include <cstdint>
#include <vector>

#include "fcnf/ccs.hpp"
#include "fcnf/network.hpp"

namespace fcnf::gen {

// Small deterministic generator (splitmix64). The standard library's
// distributions are implementation-defined, so committed golden values use
// this instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);
  // Uniform double in [lo, hi).
  double uniform_real(double lo, double hi);

 private:
  std::uint64_t state_;
};

struct NetworkGenParams {
  int min_vertices = 4;
  int max_vertices = 7;
  int min_edges = 6;
  int max_edges = 10;
  int fixed_cost_lo = 1;
  int fixed_cost_hi = 20;
  int variable_cost_lo = 0;
  int variable_cost_hi = 5;
  double capacity_factor_lo = 1.0;  // capacities drawn in [lo, hi] x target
  double capacity_factor_hi = 3.0;
  std::vector<double> targets{1.0, 2.0, 3.0};
  // Reject draws where the network, or the network minus the failable edge,
  // cannot carry the target; every accepted instance admits a full front.
  bool require_repairable = true;
  int max_attempts = 1000;
};

// Seeded random instance with a guaranteed source-to-sink path. Identical
// seed and params give an identical network.
FlowNetwork random_network(std::uint64_t seed, const NetworkGenParams& params = {});

struct CidGenParams {
  int sources = 3;
  int sinks = 2;
  int junctions = 1;
  int extra_pipes = 3;  // beyond the connecting chains
  double target = 2.0;
  int project_years = 1;
  int max_attempts = 1000;
};

// Small random capture-and-storage instance for reduction cross-checks.
CidInstance random_cid(std::uint64_t seed, const CidGenParams& params = {});

// Synthetic stand-in for the evaluation dataset's shape: 21 sources, 3 sinks,
// geographic pipe costs, no capture retrofit cost, identical storage costs,
// about 15.92 annual units of emissions. Not real data.
CidInstance nevada_like_cid(std::uint64_t seed);

}  // namespace fcnf::gen
