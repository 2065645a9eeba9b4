#include "swapsched/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace swapsched {

ErgodicState make_ergodic(const Instance& inst, double a) {
  ErgodicState st;
  st.x_tilde.assign(inst.x_size(), 0.0);
  st.a = a;
  return st;
}

void update_ergodic(ErgodicState& state,
                    const std::vector<std::uint8_t>& x_star) {
  double alpha = std::pow(static_cast<double>(state.iteration + 1), state.a);
  double total = state.alpha_cum + alpha;
  double keep = state.alpha_cum / total, add = alpha / total;
  for (std::size_t q = 0; q < state.x_tilde.size(); ++q)
    state.x_tilde[q] = keep * state.x_tilde[q] + add * x_star[q];
  state.alpha_cum = total;
  state.iteration++;
}

Neighborhood select_neighborhood(const Instance& inst,
                                 const std::vector<double>& x_tilde,
                                 const Schedule& x_best, int sigma) {
  const int N = inst.num_ports;
  std::vector<double> mass(N, 0.0);
  for (int j = 0; j < inst.num_batteries; ++j)
    for (int k = 0; k < N; ++k)
      for (int t = 1; t <= inst.horizon_of(j); ++t)
        mass[k] += inst.price[t - 1] * x_tilde[inst.xidx(j, k, t)];
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mass[a] > mass[b]; });
  Neighborhood nbhd;
  nbhd.ports.assign(order.begin(),
                    order.begin() + std::min(sigma, N));
  std::sort(nbhd.ports.begin(), nbhd.ports.end());
  nbhd.batteries_per_window.resize(inst.num_windows);
  for (int j = 0; j < inst.num_batteries; ++j) {
    bool used = false;
    for (int k : nbhd.ports)
      for (int t = 1; t <= inst.horizon_of(j) && !used; ++t)
        used = x_best.x[inst.xidx(j, k, t)] != 0;
    if (used)
      nbhd.batteries_per_window[inst.battery_window[j]].push_back(j);
  }
  return nbhd;
}

LocalSearchResult local_search_step(const Instance& inst, const Schedule& best,
                                    const Neighborhood& nbhd,
                                    const SolveLimits& limits) {
  const int T = inst.num_periods;
  LocalSearchResult res;
  res.schedule = best;
  res.value = evaluate_objective(inst, best);

  std::vector<int> batteries;
  for (const auto& wb : nbhd.batteries_per_window)
    batteries.insert(batteries.end(), wb.begin(), wb.end());
  if (batteries.empty() || nbhd.ports.empty()) return res;

  std::vector<std::uint8_t> in_nbhd(inst.num_ports, 0);
  for (int k : nbhd.ports) in_nbhd[k] = 1;

  BinaryProgram prog;
  std::vector<int> xvar(inst.x_size(), -1);
  std::vector<int> yvar(inst.y_size(), -1);
  double w = augmentation_weight(inst);
  for (int j : batteries)
    for (int k : nbhd.ports)
      for (int t = 1; t <= inst.horizon_of(j); ++t)
        xvar[inst.xidx(j, k, t)] = prog.add_variable(inst.price[t - 1]);
  for (int k : nbhd.ports)
    for (int t = 1; t < T; ++t)
      yvar[inst.yidx(k, t)] = prog.add_variable(w);

  // hours on the neighborhood ports preserved per battery
  for (int j : batteries) {
    Row r;
    double hours = 0;
    for (int k : nbhd.ports)
      for (int t = 1; t <= inst.horizon_of(j); ++t) {
        r.vars.push_back(xvar[inst.xidx(j, k, t)]);
        r.coefs.push_back(1.0);
        hours += best.x[inst.xidx(j, k, t)];
      }
    r.sense = RowSense::EQ;
    r.rhs = hours;
    prog.add_row(std::move(r));
  }
  // one battery per port-period
  for (int k : nbhd.ports)
    for (int t = 1; t <= T; ++t) {
      Row r;
      for (int j : batteries)
        if (t <= inst.horizon_of(j)) {
          r.vars.push_back(xvar[inst.xidx(j, k, t)]);
          r.coefs.push_back(1.0);
        }
      if (r.vars.size() < 2) continue;
      r.sense = RowSense::LE;
      r.rhs = 1.0;
      prog.add_row(std::move(r));
    }
  // a battery still pinned on an exterior port blocks that period
  for (int j : batteries)
    for (int t = 1; t <= inst.horizon_of(j); ++t) {
      int outside = 0;
      for (int k = 0; k < inst.num_ports; ++k)
        if (!in_nbhd[k] && best.x[inst.xidx(j, k, t)]) outside = 1;
      Row r;
      for (int k : nbhd.ports) {
        r.vars.push_back(xvar[inst.xidx(j, k, t)]);
        r.coefs.push_back(1.0);
      }
      r.sense = RowSense::LE;
      r.rhs = 1.0 - outside;
      if (outside || r.vars.size() > 1) prog.add_row(std::move(r));
    }
  // switch coverage on the neighborhood ports
  for (int k : nbhd.ports)
    for (int t = 1; t < T; ++t) {
      int y = yvar[inst.yidx(k, t)];
      Row load;
      for (int j : batteries) {
        if (t <= inst.horizon_of(j)) {
          load.vars.push_back(xvar[inst.xidx(j, k, t)]);
          load.coefs.push_back(-1.0);
        }
        if (t + 1 <= inst.horizon_of(j)) {
          load.vars.push_back(xvar[inst.xidx(j, k, t + 1)]);
          load.coefs.push_back(1.0);
        }
      }
      load.vars.push_back(y);
      load.coefs.push_back(-1.0);
      load.sense = RowSense::LE;
      load.rhs = 0.0;
      if (load.vars.size() > 1) prog.add_row(std::move(load));
      for (int j : batteries) {
        if (t > inst.horizon_of(j)) continue;
        Row r;
        r.vars.push_back(xvar[inst.xidx(j, k, t)]);
        r.coefs.push_back(1.0);
        if (t + 1 <= inst.horizon_of(j)) {
          r.vars.push_back(xvar[inst.xidx(j, k, t + 1)]);
          r.coefs.push_back(-1.0);
        }
        r.vars.push_back(y);
        r.coefs.push_back(-1.0);
        r.sense = RowSense::LE;
        r.rhs = 0.0;
        prog.add_row(std::move(r));
      }
    }
  // switch budget net of the frozen exterior
  for (int t = 1; t < T; ++t) {
    int outside = 0;
    for (int k = 0; k < inst.num_ports; ++k)
      if (!in_nbhd[k] && best.y[inst.yidx(k, t)]) ++outside;
    Row r;
    for (int k : nbhd.ports) {
      r.vars.push_back(yvar[inst.yidx(k, t)]);
      r.coefs.push_back(1.0);
    }
    r.sense = RowSense::LE;
    r.rhs = static_cast<double>(inst.gamma - outside);
    prog.add_row(std::move(r));
  }

  // the incumbent restricted to the neighborhood is feasible: warm start
  std::vector<std::uint8_t> warm(prog.num_variables(), 0);
  for (std::size_t q = 0; q < xvar.size(); ++q)
    if (xvar[q] >= 0 && best.x[q]) warm[xvar[q]] = 1;
  for (std::size_t q = 0; q < yvar.size(); ++q)
    if (yvar[q] >= 0 && best.y[q]) warm[yvar[q]] = 1;
  prog.set_warm_start(warm);

  SolveOutcome out = solve(prog, limits);
  if (!out.has_solution()) return res;

  Schedule merged = best;
  for (std::size_t q = 0; q < xvar.size(); ++q)
    if (xvar[q] >= 0) merged.x[q] = out.assignment[xvar[q]];
  merged.y = derive_switches(inst, merged.x);
  ObjectiveValue val = evaluate_objective(inst, merged);
  if (val.scalarized <= res.value.scalarized - 1e-12) {
    res.schedule = std::move(merged);
    res.value = val;
    res.improved = true;
  }
  return res;
}

}  // namespace swapsched
