#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace swapsched {

// A pure 0/1 linear program: min c'x subject to sparse rows.
enum class RowSense { LE, GE, EQ };

struct Row {
  std::vector<int> vars;
  std::vector<double> coefs;
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
};

class BinaryProgram {
 public:
  int add_variable(double objective_coef, std::string name = {});
  void add_row(Row row);
  void set_warm_start(std::vector<std::uint8_t> assignment);

  int num_variables() const { return static_cast<int>(obj_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  double objective_of(const std::vector<std::uint8_t>& x) const;
  bool satisfies(const std::vector<std::uint8_t>& x, double tol = 1e-6) const;

  // CPLEX LP text format, usable with external solvers.
  std::string to_lp_format() const;

  const std::vector<double>& objective() const { return obj_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::optional<std::vector<std::uint8_t>>& warm_start() const {
    return warm_;
  }

 private:
  std::vector<double> obj_;
  std::vector<std::string> names_;
  std::vector<Row> rows_;
  std::optional<std::vector<std::uint8_t>> warm_;
};

enum class SolveStatus {
  optimal,
  feasible_timeout,    // incumbent found, bound not closed in budget
  infeasible,
  no_solution_timeout  // budget hit before any feasible point
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::no_solution_timeout;
  std::vector<std::uint8_t> assignment;  // empty unless a feasible point exists
  double objective = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();  // always valid
  double elapsed_seconds = 0.0;
  std::uint64_t nodes = 0;

  bool has_solution() const { return !assignment.empty(); }
};

struct SolveLimits {
  double budget_seconds = 50.0;
  double relative_gap = 0.0;      // stop once (ub-lb) <= gap*max(1,|ub|)
  std::int64_t max_nodes = -1;    // <0: unlimited (deterministic cap for tests)
  bool deterministic = false;     // ignore the wall clock entirely
};

// LP relaxation over the box [0,1]^n (dense two-phase simplex; intended for
// models up to a few thousand rows/columns).
struct LpResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

LpResult solve_lp_relaxation(const BinaryProgram& prog);

// Bundled exact solver: best-bound branch and bound, branching on the
// lowest-index fractional (or undecided) variable, falling back to
// depth-first search when the open list passes one million nodes.
SolveOutcome solve(const BinaryProgram& prog, const SolveLimits& limits = {});

// ---- external backend seam ----

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using BackendFn =
    std::function<SolveOutcome(const BinaryProgram&, const SolveLimits&)>;

void register_backend(const std::string& name, BackendFn fn);
bool backend_registered(const std::string& name);
// Throws BackendError when the named backend was never registered.
SolveOutcome solve_with_backend(const std::string& name,
                                const BinaryProgram& prog,
                                const SolveLimits& limits = {});
// Name from SWAPSCHED_BACKEND, or empty when unset (use the bundled solver).
std::string configured_backend();

}  // namespace swapsched
