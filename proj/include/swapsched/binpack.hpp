#pragma once

#include <cstdint>
#include <vector>

#include "swapsched/instance.hpp"
#include "swapsched/milp.hpp"

namespace swapsched {

// Partition of each port's horizon induced by a switch pattern y: cut points
// are {0, T} plus every boundary with y_kt = 1, blocks are the consecutive
// (t1, t2] intervals between them.
struct DisjunctiveBlocks {
  struct PortBlock {
    int t1 = 0;
    int t2 = 0;
    double electricity = 0.0;  // sum of prices over t1+1..t2
  };
  std::vector<std::vector<PortBlock>> per_port;
};

DisjunctiveBlocks disjunctive_blocks(const Instance& inst,
                                     const std::vector<std::uint8_t>& y);

struct BinpackResult {
  bool feasible = false;
  Schedule schedule;       // y re-derived from the decoded x
  ObjectiveValue value;
  SolveStatus status = SolveStatus::infeasible;
};

// Packs batteries into the blocks induced by y: each block takes at most one
// battery, a battery sits on at most one port per period, and every battery
// receives exactly its required hours. A feasible packing decodes to a full
// schedule; infeasibility is a normal outcome (the caller keeps its
// incumbent).
BinpackResult solve_binpack(const Instance& inst,
                            const std::vector<std::uint8_t>& y,
                            const SolveLimits& limits = {});

}  // namespace swapsched
