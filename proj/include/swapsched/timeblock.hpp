#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "swapsched/instance.hpp"
#include "swapsched/milp.hpp"

namespace swapsched {

// Reduced prices for the copied assignment variables:
// rc_jkt = (1-beta) * c_t - mu_jkt (xidx layout, zero past the window).
std::vector<double> reduced_costs(const Instance& inst,
                                  const std::vector<double>& mu, double beta);

// A candidate charging block (t1, t2]: open start boundary, closed end.
struct Block {
  int t1 = 0;
  int t2 = 0;
  double cost = 0.0;  // best achievable reduced cost over the block
  int witness = -1;   // battery attaining it (lowest index on ties)
};

struct TimeBlockCatalog {
  std::vector<std::vector<Block>> negative;  // per port: blocks with cost < 0
};

// Number of (t1, t2) pairs considered per port: t1 in 0..T-1, t2 in 1..T.
inline long blocks_per_port(int T) { return static_cast<long>(T) * (T + 1) / 2; }

// Scans all per-port blocks, keeping only those whose best witness battery
// (window must reach t2) gives a negative total reduced cost.
TimeBlockCatalog build_catalog(const Instance& inst,
                               const std::vector<double>& rc);

struct YSSolution {
  std::vector<std::uint8_t> s;  // xidx layout
  std::vector<std::uint8_t> y;  // yidx layout
  double value = 0.0;
  double lower_bound = 0.0;     // valid bound on the subproblem optimum
  SolveStatus status = SolveStatus::optimal;
  // Chosen blocks per port; feed back as warm start for the next pricing.
  std::vector<std::vector<std::pair<int, int>>> chosen;
};

// Block formulation: pick non-overlapping negative blocks per port, paying w
// per switch, at most gamma simultaneous switches per interior boundary.
// `carry` may hold the previous call's chosen blocks for warm starting.
YSSolution solve_ys_timeblock(
    const Instance& inst, const std::vector<double>& rc,
    const SolveLimits& limits = {},
    const std::vector<std::vector<std::pair<int, int>>>* carry = nullptr);

// Reference formulation on the raw (y, s) polytope (switch-coverage rows,
// gamma cap, and the one-battery-per-port-slot cap).
YSSolution solve_ys_original(const Instance& inst, const std::vector<double>& rc,
                             const SolveLimits& limits = {});

// LP relaxation values of the two formulations (tightness analysis).
double lp_bound_timeblock(const Instance& inst, const std::vector<double>& rc);
double lp_bound_original(const Instance& inst, const std::vector<double>& rc);

}  // namespace swapsched
