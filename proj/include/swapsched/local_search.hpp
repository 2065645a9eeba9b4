#pragma once

#include <cstdint>
#include <vector>

#include "swapsched/instance.hpp"
#include "swapsched/milp.hpp"

namespace swapsched {

// Streaming convex combination of visited x-subproblem solutions under the
// p^a weight rule; no history is stored.
struct ErgodicState {
  std::vector<double> x_tilde;  // xidx layout
  long iteration = 0;
  double a = 4.0;
  double alpha_cum = 0.0;  // sum of weights folded in so far
};

ErgodicState make_ergodic(const Instance& inst, double a);
void update_ergodic(ErgodicState& state, const std::vector<std::uint8_t>& x_star);

// Ports ranked by ergodic electricity mass, plus the batteries the incumbent
// places on them (per window).
struct Neighborhood {
  std::vector<int> ports;
  std::vector<std::vector<int>> batteries_per_window;
};

Neighborhood select_neighborhood(const Instance& inst,
                                 const std::vector<double>& x_tilde,
                                 const Schedule& x_best, int sigma);

struct LocalSearchResult {
  Schedule schedule;
  ObjectiveValue value;
  bool improved = false;
};

// Re-optimizes the neighborhood ports' assignments with the exterior frozen.
// Never worse than the incumbent; falls back to it on timeout.
LocalSearchResult local_search_step(const Instance& inst, const Schedule& best,
                                    const Neighborhood& nbhd,
                                    const SolveLimits& limits = {});

}  // namespace swapsched
