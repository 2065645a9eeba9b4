#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swapsched/dual.hpp"
#include "swapsched/instance.hpp"

namespace swapsched {

enum class Method { Simple, MDS };

struct VariationFlags {
  Method method = Method::Simple;
  bool reg = false;        // project multipliers onto the per-window fit
  bool binpack = true;     // packing heuristic vs fixed-switch projection
  bool local_search = false;
};

// Grid cells 1..16: Simple for 1-8 and MDS for 9-16, then Reg/nReg,
// var-fix-binP/var-fix, Loc/nLoc nested inside.
VariationFlags decode_variation(int variation);

struct SolverConfig {
  int variation = 2;
  double beta = 0.5;
  int heu = 20;
  double a = 4.0;
  int sigma = 0;  // 0: max(2, ceil(0.1 N))
  double theta0 = 1.0;
  double epsilon = 1e-3;
  double total_budget_seconds = 60.0;
  double per_subproblem_seconds = 50.0;
  // test mode: iteration-count budget, deterministic node-capped subsolves
  long max_iterations = -1;
  bool test_mode = false;
  std::uint64_t seed = 0;
  const RegressionFit* warm_fit = nullptr;
};

struct TraceEvent {
  double elapsed_seconds = 0.0;
  long iteration = 0;
  double h_upper = 0.0;
  double h_lower = 0.0;
  std::string source;  // dual | heuristic | local_search
};

struct SolveResult {
  bool has_schedule = false;
  Schedule schedule;
  ObjectiveValue value;
  double h_upper = 0.0;
  double h_lower = 0.0;
  double gap = 1.0;
  long iterations = 0;
  int variation = 0;
  std::string termination;  // gap | budget | iterations | stalled | infeasible
  std::vector<TraceEvent> trace;
  std::vector<double> multipliers;  // final dual point, xidx layout
};

SolveResult run(const Instance& inst, const SolverConfig& config);

// (h_upper - h_lower) / h_upper; 1.0 with no incumbent. h_upper must be
// positive when finite.
double gap_fraction(double h_upper, double h_lower);

struct IntegralResult {
  double theta = 0.0;
  double excluded_seconds = 0.0;  // leading span with an infinite bound
};

// Piecewise-constant integral of the bound gap up to t_lim.
IntegralResult primal_dual_integral(const std::vector<TraceEvent>& trace,
                                    double t_lim);

struct GridRow {
  int variation = 0;
  SolveResult result;
  // percent off the best cell in the grid (0 = best); 100 with no incumbent
  double upper_increase_pct = 0.0;
  double lower_decrease_pct = 0.0;
};

std::vector<GridRow> run_variation_grid(const Instance& inst,
                                        const SolverConfig& base,
                                        const std::vector<int>& variations);

}  // namespace swapsched
