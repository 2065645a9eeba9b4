#pragma once

#include <functional>
#include <vector>

#include "swapsched/instance.hpp"

namespace swapsched::testutil {

// Exhaustive optimum by occupant enumeration; tiny instances only.
struct BruteBest {
  bool found = false;
  double value = 0.0;
  Schedule schedule;
};

inline BruteBest brute_best(const Instance& inst) {
  const int B = inst.num_batteries, N = inst.num_ports, T = inst.num_periods;
  BruteBest best;
  std::vector<int> occ(N * T, 0);
  std::function<void(int)> rec = [&](int slot) {
    if (slot == N * T) {
      Schedule sched = Schedule::zeros(inst);
      for (int k = 0; k < N; ++k)
        for (int t = 1; t <= T; ++t)
          if (occ[k * T + t - 1] > 0)
            sched.x[inst.xidx(occ[k * T + t - 1] - 1, k, t)] = 1;
      sched.y = derive_switches(inst, sched.x);
      if (!check_feasible(inst, sched).feasible) return;
      double v = evaluate_objective(inst, sched).scalarized;
      if (!best.found || v < best.value) {
        best.found = true;
        best.value = v;
        best.schedule = sched;
      }
      return;
    }
    int k = slot / T, t = slot % T + 1;
    for (int j = 0; j <= B; ++j) {
      if (j > 0 && inst.horizon_of(j - 1) < t) continue;
      occ[slot] = j;
      rec(slot + 1);
    }
    occ[slot] = 0;
  };
  rec(0);
  return best;
}

// Small single-window showcase: 8 batteries, 4 ports, 5 periods.
inline Instance showcase_instance(int gamma = 4) {
  Instance inst;
  inst.num_batteries = 8;
  inst.num_ports = 4;
  inst.num_periods = 5;
  inst.num_windows = 1;
  inst.window_end = {5};
  inst.battery_window.assign(8, 0);
  inst.demand_hours = {1, 2, 4, 3, 2, 1, 2, 2};
  inst.price = {13.8, 9.0, 10.8, 13.6, 7.3};
  inst.alpha = 1.0;
  inst.gamma = gamma;
  inst.validate();
  return inst;
}

// Builds x from per-port occupant lists: occupants[k][t-1] = 1-based battery
// or 0 for idle; y is derived minimally.
inline Schedule schedule_from_ports(const Instance& inst,
                                    const std::vector<std::vector<int>>& occ) {
  Schedule s = Schedule::zeros(inst);
  for (int k = 0; k < inst.num_ports; ++k)
    for (int t = 1; t <= inst.num_periods; ++t) {
      int j = occ[k][t - 1];
      if (j > 0) s.x[inst.xidx(j - 1, k, t)] = 1;
    }
  s.y = derive_switches(inst, s.x);
  return s;
}

// A feasible 13-switch schedule for the showcase instance, cost 196.1.
inline Schedule showcase_incumbent(const Instance& inst) {
  return schedule_from_ports(inst, {{4, 2, 4, 8, 4},
                                    {1, 6, 8, 2, 0},
                                    {3, 3, 3, 5, 0},
                                    {5, 7, 7, 3, 0}});
}

// An improved 9-switch schedule, cost 189.6; feasible even at gamma = 3.
inline Schedule showcase_improved(const Instance& inst) {
  return schedule_from_ports(inst, {{0, 4, 4, 4, 6},
                                    {1, 2, 2, 8, 8},
                                    {3, 3, 3, 5, 0},
                                    {5, 7, 7, 3, 0}});
}

}  // namespace swapsched::testutil
