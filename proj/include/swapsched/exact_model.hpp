#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swapsched/instance.hpp"
#include "swapsched/milp.hpp"

namespace swapsched {

class ModelSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactResult {
  SolveStatus status = SolveStatus::no_solution_timeout;
  bool has_schedule = false;
  Schedule schedule;
  ObjectiveValue value;
  double lower_bound = 0.0;
};

// Full assignment model: demand rows, port and battery exclusivity, switch
// coverage, and the per-boundary switch cap.
BinaryProgram build_exact_program(const Instance& inst);

long exact_variable_count(const Instance& inst);

// Solves the full model with the bundled solver (or the configured backend).
// Without a backend, instances beyond `max_bundled_vars` variables are
// refused with ModelSizeError.
ExactResult solve_exact(const Instance& inst, const SolveLimits& limits = {},
                        long max_bundled_vars = 60000);

// Projection with switches pinned to y: solves for x only. Infeasibility is
// a normal outcome.
ExactResult solve_fixed_switches(const Instance& inst,
                                 const std::vector<std::uint8_t>& y,
                                 const SolveLimits& limits = {},
                                 long max_bundled_vars = 60000);

}  // namespace swapsched
