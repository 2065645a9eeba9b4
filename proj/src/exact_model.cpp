#include "swapsched/exact_model.hpp"

#include <string>

namespace swapsched {

namespace {

// x variables in (j, k, t <= n_j) loop order, then y in (k, t) order.
struct Layout {
  std::vector<int> xvar;  // xidx layout, -1 past the window
  std::vector<int> yvar;  // yidx layout
  int count = 0;
};

Layout make_layout(const Instance& inst, bool with_y) {
  Layout lay;
  lay.xvar.assign(inst.x_size(), -1);
  lay.yvar.assign(inst.y_size(), -1);
  for (int j = 0; j < inst.num_batteries; ++j)
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t <= inst.horizon_of(j); ++t)
        lay.xvar[inst.xidx(j, k, t)] = lay.count++;
  if (with_y)
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t < inst.num_periods; ++t)
        lay.yvar[inst.yidx(k, t)] = lay.count++;
  return lay;
}

void add_demand_rows(const Instance& inst, const Layout& lay,
                     BinaryProgram& prog) {
  for (int j = 0; j < inst.num_batteries; ++j) {
    Row r;
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t <= inst.horizon_of(j); ++t) {
        r.vars.push_back(lay.xvar[inst.xidx(j, k, t)]);
        r.coefs.push_back(1.0);
      }
    r.sense = inst.in_last_window(j) ? RowSense::GE : RowSense::EQ;
    r.rhs = static_cast<double>(inst.required_hours(j));
    prog.add_row(std::move(r));
  }
}

void add_exclusivity_rows(const Instance& inst, const Layout& lay,
                          BinaryProgram& prog) {
  for (int k = 0; k < inst.num_ports; ++k)
    for (int t = 1; t <= inst.num_periods; ++t) {
      Row r;
      for (int j = 0; j < inst.num_batteries; ++j)
        if (t <= inst.horizon_of(j)) {
          r.vars.push_back(lay.xvar[inst.xidx(j, k, t)]);
          r.coefs.push_back(1.0);
        }
      if (r.vars.size() < 2) continue;
      r.sense = RowSense::LE;
      r.rhs = 1.0;
      prog.add_row(std::move(r));
    }
  if (inst.num_ports < 2) return;
  for (int j = 0; j < inst.num_batteries; ++j)
    for (int t = 1; t <= inst.horizon_of(j); ++t) {
      Row r;
      for (int k = 0; k < inst.num_ports; ++k) {
        r.vars.push_back(lay.xvar[inst.xidx(j, k, t)]);
        r.coefs.push_back(1.0);
      }
      r.sense = RowSense::LE;
      r.rhs = 1.0;
      prog.add_row(std::move(r));
    }
}

// Switch coverage at boundary t on port k. With y_var < 0 the boundary is
// pinned: fixed_y = 1 drops the row, fixed_y = 0 keeps it with rhs 0.
void add_switch_rows(const Instance& inst, const Layout& lay,
                     const std::vector<std::uint8_t>* fixed_y,
                     BinaryProgram& prog) {
  const int B = inst.num_batteries, N = inst.num_ports, T = inst.num_periods;
  for (int k = 0; k < N; ++k)
    for (int t = 1; t < T; ++t) {
      int y = lay.yvar[inst.yidx(k, t)];
      if (y < 0 && (*fixed_y)[inst.yidx(k, t)]) continue;
      Row load;
      for (int j = 0; j < B; ++j) {
        if (t <= inst.horizon_of(j)) {
          load.vars.push_back(lay.xvar[inst.xidx(j, k, t)]);
          load.coefs.push_back(-1.0);
        }
        if (t + 1 <= inst.horizon_of(j)) {
          load.vars.push_back(lay.xvar[inst.xidx(j, k, t + 1)]);
          load.coefs.push_back(1.0);
        }
      }
      if (y >= 0) {
        load.vars.push_back(y);
        load.coefs.push_back(-1.0);
      }
      load.sense = RowSense::LE;
      load.rhs = 0.0;
      if (load.vars.size() > (y >= 0 ? 1u : 0u)) prog.add_row(std::move(load));
      for (int j = 0; j < B; ++j) {
        if (t > inst.horizon_of(j)) continue;
        Row r;
        r.vars.push_back(lay.xvar[inst.xidx(j, k, t)]);
        r.coefs.push_back(1.0);
        if (t + 1 <= inst.horizon_of(j)) {
          r.vars.push_back(lay.xvar[inst.xidx(j, k, t + 1)]);
          r.coefs.push_back(-1.0);
        }
        if (y >= 0) {
          r.vars.push_back(y);
          r.coefs.push_back(-1.0);
        }
        r.sense = RowSense::LE;
        r.rhs = 0.0;
        prog.add_row(std::move(r));
      }
    }
}

BinaryProgram build_program(const Instance& inst, const Layout& lay,
                            const std::vector<std::uint8_t>* fixed_y) {
  BinaryProgram prog;
  double w = augmentation_weight(inst);
  for (int j = 0; j < inst.num_batteries; ++j)
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t <= inst.horizon_of(j); ++t)
        prog.add_variable(inst.price[t - 1],
                          "x_" + std::to_string(j + 1) + "_" +
                              std::to_string(k + 1) + "_" + std::to_string(t));
  if (!fixed_y)
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t < inst.num_periods; ++t)
        prog.add_variable(w, "y_" + std::to_string(k + 1) + "_" +
                                 std::to_string(t));

  add_demand_rows(inst, lay, prog);
  add_exclusivity_rows(inst, lay, prog);
  add_switch_rows(inst, lay, fixed_y, prog);
  if (!fixed_y)
    for (int t = 1; t < inst.num_periods; ++t) {
      Row r;
      for (int k = 0; k < inst.num_ports; ++k) {
        r.vars.push_back(lay.yvar[inst.yidx(k, t)]);
        r.coefs.push_back(1.0);
      }
      r.sense = RowSense::LE;
      r.rhs = static_cast<double>(inst.gamma);
      prog.add_row(std::move(r));
    }
  return prog;
}

ExactResult run(const Instance& inst, const BinaryProgram& prog,
                const Layout& lay, const SolveLimits& limits,
                long max_bundled_vars) {
  std::string backend = configured_backend();
  if (backend.empty() && prog.num_variables() > max_bundled_vars)
    throw ModelSizeError(
        "model has " + std::to_string(prog.num_variables()) +
        " variables; register a MILP backend (SWAPSCHED_BACKEND) or raise "
        "the bundled-solver cap");
  SolveOutcome out = backend.empty()
                         ? solve(prog, limits)
                         : solve_with_backend(backend, prog, limits);
  ExactResult res;
  res.status = out.status;
  res.lower_bound = out.lower_bound;
  if (!out.has_solution()) return res;
  res.has_schedule = true;
  res.schedule = Schedule::zeros(inst);
  for (std::size_t q = 0; q < lay.xvar.size(); ++q)
    if (lay.xvar[q] >= 0 && out.assignment[lay.xvar[q]])
      res.schedule.x[q] = 1;
  res.schedule.y = derive_switches(inst, res.schedule.x);
  res.value = evaluate_objective(inst, res.schedule);
  return res;
}

}  // namespace

BinaryProgram build_exact_program(const Instance& inst) {
  return build_program(inst, make_layout(inst, true), nullptr);
}

long exact_variable_count(const Instance& inst) {
  long n = 0;
  for (int j = 0; j < inst.num_batteries; ++j)
    n += static_cast<long>(inst.num_ports) * inst.horizon_of(j);
  return n + static_cast<long>(inst.num_ports) * (inst.num_periods - 1);
}

ExactResult solve_exact(const Instance& inst, const SolveLimits& limits,
                        long max_bundled_vars) {
  Layout lay = make_layout(inst, true);
  return run(inst, build_program(inst, lay, nullptr), lay, limits,
             max_bundled_vars);
}

ExactResult solve_fixed_switches(const Instance& inst,
                                 const std::vector<std::uint8_t>& y,
                                 const SolveLimits& limits,
                                 long max_bundled_vars) {
  Layout lay = make_layout(inst, false);
  return run(inst, build_program(inst, lay, &y), lay, limits,
             max_bundled_vars);
}

}  // namespace swapsched
