#include "swapsched/timeblock.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace swapsched {

std::vector<double> reduced_costs(const Instance& inst,
                                  const std::vector<double>& mu, double beta) {
  std::vector<double> rc(inst.x_size(), 0.0);
  for (int j = 0; j < inst.num_batteries; ++j)
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t <= inst.horizon_of(j); ++t) {
        std::size_t q = inst.xidx(j, k, t);
        rc[q] = (1.0 - beta) * inst.price[t - 1] - mu[q];
      }
  return rc;
}

TimeBlockCatalog build_catalog(const Instance& inst,
                               const std::vector<double>& rc) {
  const int B = inst.num_batteries, N = inst.num_ports, T = inst.num_periods;
  TimeBlockCatalog cat;
  cat.negative.resize(N);
  std::vector<std::vector<double>> prefix(B, std::vector<double>(T + 1, 0.0));
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < B; ++j)
      for (int t = 1; t <= inst.horizon_of(j); ++t)
        prefix[j][t] = prefix[j][t - 1] + rc[inst.xidx(j, k, t)];
    for (int t1 = 0; t1 < T; ++t1)
      for (int t2 = t1 + 1; t2 <= T; ++t2) {
        double best = std::numeric_limits<double>::infinity();
        int who = -1;
        for (int j = 0; j < B; ++j) {
          if (inst.horizon_of(j) < t2) continue;
          double v = prefix[j][t2] - prefix[j][t1];
          if (v < best - 1e-12) {
            best = v;
            who = j;
          }
        }
        if (who >= 0 && best < -1e-12)
          cat.negative[k].push_back({t1, t2, best, who});
      }
  }
  return cat;
}

namespace {

struct TbVars {
  BinaryProgram prog;
  // lambda var ids parallel to catalog blocks; y ids per (k,t).
  std::vector<std::vector<int>> lam;
  std::vector<int> yvar;  // yidx layout
};

TbVars build_timeblock_program(const Instance& inst, const TimeBlockCatalog& cat,
                               double w) {
  const int N = inst.num_ports, T = inst.num_periods;
  TbVars tb;
  tb.lam.resize(N);
  for (int k = 0; k < N; ++k)
    for (const Block& b : cat.negative[k])
      tb.lam[k].push_back(tb.prog.add_variable(
          b.cost, "l_" + std::to_string(k + 1) + "_" + std::to_string(b.t1) +
                      "_" + std::to_string(b.t2)));
  tb.yvar.assign(inst.y_size(), -1);
  for (int k = 0; k < N; ++k)
    for (int t = 1; t < T; ++t)
      tb.yvar[inst.yidx(k, t)] = tb.prog.add_variable(
          w, "y_" + std::to_string(k + 1) + "_" + std::to_string(t));

  for (int k = 0; k < N; ++k) {
    const auto& blocks = cat.negative[k];
    // chosen blocks on a port are disjoint: at most unit coverage per slot.
    // Implies exclusion of any overlapping pair and keeps the relaxation at
    // least as tight as the raw (s, y) model.
    for (int t = 1; t <= T; ++t) {
      Row cover;
      for (std::size_t a = 0; a < blocks.size(); ++a)
        if (blocks[a].t1 < t && t <= blocks[a].t2) {
          cover.vars.push_back(tb.lam[k][a]);
          cover.coefs.push_back(1.0);
        }
      if (cover.vars.size() < 2) continue;
      cover.sense = RowSense::LE;
      cover.rhs = 1.0;
      tb.prog.add_row(std::move(cover));
    }
    // switches at interior block starts and ends
    for (int t = 1; t < T; ++t) {
      Row start_row, end_row;
      for (std::size_t a = 0; a < blocks.size(); ++a) {
        if (blocks[a].t1 == t) {
          start_row.vars.push_back(tb.lam[k][a]);
          start_row.coefs.push_back(1.0);
        }
        if (blocks[a].t2 == t) {
          end_row.vars.push_back(tb.lam[k][a]);
          end_row.coefs.push_back(1.0);
        }
      }
      for (Row* r : {&start_row, &end_row}) {
        if (r->vars.empty()) continue;
        r->vars.push_back(tb.yvar[inst.yidx(k, t)]);
        r->coefs.push_back(-1.0);
        r->sense = RowSense::LE;
        r->rhs = 0.0;
        tb.prog.add_row(std::move(*r));
      }
    }
  }
  for (int t = 1; t < T; ++t) {
    Row r;
    for (int k = 0; k < N; ++k) {
      r.vars.push_back(tb.yvar[inst.yidx(k, t)]);
      r.coefs.push_back(1.0);
    }
    r.sense = RowSense::LE;
    r.rhs = inst.gamma;
    tb.prog.add_row(std::move(r));
  }
  return tb;
}

struct OrigVars {
  BinaryProgram prog;
  std::vector<int> svar;  // xidx layout, -1 past the window
  std::vector<int> yvar;  // yidx layout
};

OrigVars build_original_program(const Instance& inst,
                                const std::vector<double>& rc, double w) {
  const int B = inst.num_batteries, N = inst.num_ports, T = inst.num_periods;
  OrigVars ov;
  ov.svar.assign(inst.x_size(), -1);
  ov.yvar.assign(inst.y_size(), -1);
  for (int j = 0; j < B; ++j)
    for (int k = 0; k < N; ++k)
      for (int t = 1; t <= inst.horizon_of(j); ++t) {
        std::size_t q = inst.xidx(j, k, t);
        ov.svar[q] = ov.prog.add_variable(rc[q]);
      }
  for (int k = 0; k < N; ++k)
    for (int t = 1; t < T; ++t)
      ov.yvar[inst.yidx(k, t)] = ov.prog.add_variable(w);

  for (int k = 0; k < N; ++k)
    for (int t = 1; t < T; ++t) {
      int y = ov.yvar[inst.yidx(k, t)];
      // load coverage: sum_j s_jk(t+1) - sum_j s_jkt <= y
      Row load;
      for (int j = 0; j < B; ++j) {
        if (ov.svar[inst.xidx(j, k, t)] >= 0) {
          load.vars.push_back(ov.svar[inst.xidx(j, k, t)]);
          load.coefs.push_back(-1.0);
        }
        if (t + 1 <= inst.horizon_of(j)) {
          load.vars.push_back(ov.svar[inst.xidx(j, k, t + 1)]);
          load.coefs.push_back(1.0);
        }
      }
      load.vars.push_back(y);
      load.coefs.push_back(-1.0);
      load.sense = RowSense::LE;
      load.rhs = 0.0;
      if (load.vars.size() > 1) ov.prog.add_row(std::move(load));
      // unload coverage per battery: s_jkt - s_jk(t+1) <= y
      for (int j = 0; j < B; ++j) {
        int cur = ov.svar[inst.xidx(j, k, t)];
        if (cur < 0) continue;
        Row r;
        r.vars.push_back(cur);
        r.coefs.push_back(1.0);
        if (t + 1 <= inst.horizon_of(j)) {
          r.vars.push_back(ov.svar[inst.xidx(j, k, t + 1)]);
          r.coefs.push_back(-1.0);
        }
        r.vars.push_back(y);
        r.coefs.push_back(-1.0);
        r.sense = RowSense::LE;
        r.rhs = 0.0;
        ov.prog.add_row(std::move(r));
      }
    }
  // one battery per port-period
  for (int k = 0; k < N; ++k)
    for (int t = 1; t <= T; ++t) {
      Row r;
      for (int j = 0; j < B; ++j)
        if (ov.svar[inst.xidx(j, k, t)] >= 0) {
          r.vars.push_back(ov.svar[inst.xidx(j, k, t)]);
          r.coefs.push_back(1.0);
        }
      if (r.vars.size() < 2) continue;
      r.sense = RowSense::LE;
      r.rhs = 1.0;
      ov.prog.add_row(std::move(r));
    }
  // gamma cap
  for (int t = 1; t < T; ++t) {
    Row r;
    for (int k = 0; k < N; ++k) {
      r.vars.push_back(ov.yvar[inst.yidx(k, t)]);
      r.coefs.push_back(1.0);
    }
    r.sense = RowSense::LE;
    r.rhs = inst.gamma;
    ov.prog.add_row(std::move(r));
  }
  return ov;
}

}  // namespace

YSSolution solve_ys_timeblock(
    const Instance& inst, const std::vector<double>& rc,
    const SolveLimits& limits,
    const std::vector<std::vector<std::pair<int, int>>>* carry) {
  const int N = inst.num_ports, T = inst.num_periods;
  YSSolution out;
  out.s.assign(inst.x_size(), 0);
  out.y.assign(inst.y_size(), 0);
  out.chosen.resize(N);
  TimeBlockCatalog cat = build_catalog(inst, rc);
  bool any = false;
  for (const auto& v : cat.negative) any |= !v.empty();
  if (!any) return out;  // charging nothing is optimal

  double w = augmentation_weight(inst);
  TbVars tb = build_timeblock_program(inst, cat, w);

  if (carry) {
    // Map still-present previous blocks onto the new variables.
    std::vector<std::uint8_t> warm(tb.prog.num_variables(), 0);
    for (int k = 0; k < N && k < static_cast<int>(carry->size()); ++k)
      for (auto [t1, t2] : (*carry)[k])
        for (std::size_t a = 0; a < cat.negative[k].size(); ++a)
          if (cat.negative[k][a].t1 == t1 && cat.negative[k][a].t2 == t2)
            warm[tb.lam[k][a]] = 1;
    for (int k = 0; k < N; ++k)
      for (std::size_t a = 0; a < cat.negative[k].size(); ++a)
        if (warm[tb.lam[k][a]]) {
          const Block& b = cat.negative[k][a];
          if (b.t1 >= 1) warm[tb.yvar[inst.yidx(k, b.t1)]] = 1;
          if (b.t2 <= T - 1) warm[tb.yvar[inst.yidx(k, b.t2)]] = 1;
        }
    if (tb.prog.satisfies(warm)) tb.prog.set_warm_start(std::move(warm));
  }

  SolveOutcome res = solve(tb.prog, limits);
  out.status = res.status;
  out.lower_bound = std::min(res.lower_bound, 0.0);
  if (!res.has_solution() || res.objective > 0.0) {
    // The empty selection is always feasible and costs nothing.
    out.value = 0.0;
    out.chosen.assign(N, {});
    if (res.status == SolveStatus::no_solution_timeout)
      out.status = SolveStatus::feasible_timeout;
    return out;
  }
  for (int k = 0; k < N; ++k)
    for (std::size_t a = 0; a < cat.negative[k].size(); ++a)
      if (res.assignment[tb.lam[k][a]]) {
        const Block& b = cat.negative[k][a];
        out.chosen[k].push_back({b.t1, b.t2});
        for (int t = b.t1 + 1; t <= b.t2; ++t)
          out.s[inst.xidx(b.witness, k, t)] = 1;
      }
  for (std::size_t q = 0; q < out.y.size(); ++q)
    out.y[q] = res.assignment[tb.yvar[q]];
  out.value = res.objective;
  return out;
}

YSSolution solve_ys_original(const Instance& inst, const std::vector<double>& rc,
                             const SolveLimits& limits) {
  YSSolution out;
  out.s.assign(inst.x_size(), 0);
  out.y.assign(inst.y_size(), 0);
  out.chosen.resize(inst.num_ports);
  double w = augmentation_weight(inst);
  OrigVars ov = build_original_program(inst, rc, w);
  // All-zero is feasible; hand it over so a timeout still returns something.
  ov.prog.set_warm_start(std::vector<std::uint8_t>(ov.prog.num_variables(), 0));
  SolveOutcome res = solve(ov.prog, limits);
  out.status = res.status;
  out.lower_bound = std::min(res.lower_bound, 0.0);
  if (!res.has_solution()) {
    out.value = 0.0;
    return out;
  }
  for (std::size_t q = 0; q < out.s.size(); ++q)
    if (ov.svar[q] >= 0) out.s[q] = res.assignment[ov.svar[q]];
  for (std::size_t q = 0; q < out.y.size(); ++q)
    out.y[q] = res.assignment[ov.yvar[q]];
  out.value = res.objective;
  return out;
}

double lp_bound_timeblock(const Instance& inst, const std::vector<double>& rc) {
  TimeBlockCatalog cat = build_catalog(inst, rc);
  bool any = false;
  for (const auto& v : cat.negative) any |= !v.empty();
  if (!any) return 0.0;
  TbVars tb = build_timeblock_program(inst, cat, augmentation_weight(inst));
  LpResult lp = solve_lp_relaxation(tb.prog);
  return lp.value;
}

double lp_bound_original(const Instance& inst, const std::vector<double>& rc) {
  OrigVars ov = build_original_program(inst, rc, augmentation_weight(inst));
  LpResult lp = solve_lp_relaxation(ov.prog);
  return lp.value;
}

}  // namespace swapsched
