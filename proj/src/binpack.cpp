#include "swapsched/binpack.hpp"

#include <string>

namespace swapsched {

DisjunctiveBlocks disjunctive_blocks(const Instance& inst,
                                     const std::vector<std::uint8_t>& y) {
  const int N = inst.num_ports, T = inst.num_periods;
  DisjunctiveBlocks blocks;
  blocks.per_port.resize(N);
  std::vector<double> prefix(T + 1, 0.0);
  for (int t = 1; t <= T; ++t) prefix[t] = prefix[t - 1] + inst.price[t - 1];
  for (int k = 0; k < N; ++k) {
    int t1 = 0;
    for (int t = 1; t <= T; ++t) {
      bool cut = (t == T) || y[inst.yidx(k, t)] != 0;
      if (!cut) continue;
      blocks.per_port[k].push_back({t1, t, prefix[t] - prefix[t1]});
      t1 = t;
    }
  }
  return blocks;
}

BinpackResult solve_binpack(const Instance& inst,
                            const std::vector<std::uint8_t>& y,
                            const SolveLimits& limits) {
  const int B = inst.num_batteries, N = inst.num_ports, T = inst.num_periods;
  DisjunctiveBlocks blocks = disjunctive_blocks(inst, y);

  BinaryProgram prog;
  struct Var {
    int k, bi, j;
  };
  std::vector<Var> vars;
  // battery j may only take blocks ending by its deadline
  std::vector<std::vector<int>> per_block;  // parallel to (k, bi), var ids
  std::vector<std::vector<int>> per_battery(B);
  for (int k = 0; k < N; ++k)
    for (std::size_t bi = 0; bi < blocks.per_port[k].size(); ++bi) {
      const auto& blk = blocks.per_port[k][bi];
      per_block.emplace_back();
      for (int j = 0; j < B; ++j) {
        if (blk.t2 > inst.horizon_of(j)) continue;
        int v = prog.add_variable(
            blk.electricity, "k_" + std::to_string(k + 1) + "_" +
                                 std::to_string(blk.t1) + "_" +
                                 std::to_string(blk.t2) + "_" +
                                 std::to_string(j + 1));
        vars.push_back({k, static_cast<int>(bi), j});
        per_block.back().push_back(v);
        per_battery[j].push_back(v);
      }
    }

  // one battery per block
  for (const auto& ids : per_block) {
    if (ids.size() < 2) continue;
    Row r;
    for (int v : ids) {
      r.vars.push_back(v);
      r.coefs.push_back(1.0);
    }
    r.sense = RowSense::LE;
    r.rhs = 1.0;
    prog.add_row(std::move(r));
  }
  // a battery occupies at most one port in any period
  if (N > 1) {
    for (int j = 0; j < B; ++j)
      for (int t = 1; t <= inst.horizon_of(j); ++t) {
        Row r;
        for (int v : per_battery[j]) {
          const auto& blk = blocks.per_port[vars[v].k][vars[v].bi];
          if (blk.t1 < t && t <= blk.t2) {
            r.vars.push_back(v);
            r.coefs.push_back(1.0);
          }
        }
        if (r.vars.size() < 2) continue;
        r.sense = RowSense::LE;
        r.rhs = 1.0;
        prog.add_row(std::move(r));
      }
  }
  // exact demand per battery
  for (int j = 0; j < B; ++j) {
    Row r;
    for (int v : per_battery[j]) {
      const auto& blk = blocks.per_port[vars[v].k][vars[v].bi];
      r.vars.push_back(v);
      r.coefs.push_back(static_cast<double>(blk.t2 - blk.t1));
    }
    r.sense = RowSense::EQ;
    r.rhs = static_cast<double>(inst.required_hours(j));
    if (r.vars.empty() && r.rhs > 0) {
      BinpackResult res;
      res.status = SolveStatus::infeasible;
      return res;
    }
    prog.add_row(std::move(r));
  }

  SolveOutcome out = solve(prog, limits);
  BinpackResult res;
  res.status = out.status;
  if (!out.has_solution()) return res;

  Schedule sched = Schedule::zeros(inst);
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (!out.assignment[v]) continue;
    const auto& blk = blocks.per_port[vars[v].k][vars[v].bi];
    for (int t = blk.t1 + 1; t <= blk.t2; ++t)
      sched.x[inst.xidx(vars[v].j, vars[v].k, t)] = 1;
  }
  sched.y = derive_switches(inst, sched.x);
  res.feasible = true;
  res.schedule = std::move(sched);
  res.value = evaluate_objective(inst, res.schedule);
  return res;
}

}  // namespace swapsched
