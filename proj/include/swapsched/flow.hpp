#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swapsched/instance.hpp"

namespace swapsched {

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct XSolution {
  std::vector<std::uint8_t> x;  // (j,k,t) tensor, Instance::xidx layout
  double value = 0.0;           // sum of (beta*c_t + mu_jkt) * x, unscaled
};

// Assignment-polytope subproblem: min sum (beta*c_t + mu_jkt) x_jkt over the
// demand/capacity constraints, as a min-cost flow.
//
// Network: source -> battery j (supply p_j; batteries in the last window get
// supply T plus a zero-cost overflow arc to the sink with capacity
// T - ceil(alpha p_j), so delivered hours range freely over what the model
// allows) -> slot (j,t) -> port-period (k,t) -> sink, unit capacities in the
// middle. Costs are integer-scaled by 1e6 with banker's rounding; the
// reported value is recomputed unscaled from the returned x.
class FlowSubproblem {
 public:
  FlowSubproblem(const Instance& inst, double beta);

  // Re-prices the middle arcs for a new multiplier tensor (xidx layout).
  void update_costs(const std::vector<double>& mu);

  // Runs successive shortest paths from scratch. Throws FlowError if the
  // instance cannot deliver the demanded hours at all.
  XSolution solve();

  double beta() const { return beta_; }

 private:
  struct Arc {
    int head;
    int cap;
    std::int64_t cost;
    int flow = 0;
  };

  int add_arc(int from, int to, int cap, std::int64_t cost);

  const Instance& inst_;
  double beta_;
  std::vector<double> mu_;
  int num_nodes_ = 0;
  int source_ = 0, sink_ = 0;
  std::vector<Arc> arcs_;                 // arc i pairs with i^1 (reverse)
  std::vector<std::vector<int>> adj_;
  std::vector<int> middle_arc_;           // per (j,k,t), -1 when t > n_j
  int total_supply_ = 0;
};

// Convenience wrapper: build, price, solve.
XSolution solve_x_subproblem(const Instance& inst, const std::vector<double>& mu,
                             double beta);

}  // namespace swapsched
