#include "swapsched/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "swapsched/binpack.hpp"
#include "swapsched/exact_model.hpp"
#include "swapsched/flow.hpp"
#include "swapsched/local_search.hpp"
#include "swapsched/timeblock.hpp"

namespace swapsched {

VariationFlags decode_variation(int variation) {
  if (variation < 1 || variation > 16)
    throw std::invalid_argument("variation must be 1..16");
  VariationFlags f;
  int v = variation - 1;
  f.method = (variation <= 8) ? Method::Simple : Method::MDS;
  f.reg = (v % 8) < 4;
  f.binpack = (v % 4) < 2;
  f.local_search = (v % 2) == 0;
  return f;
}

double gap_fraction(double h_upper, double h_lower) {
  if (!std::isfinite(h_upper)) return 1.0;
  if (h_upper <= 0)
    throw std::invalid_argument("gap undefined for non-positive upper bound");
  return std::max(0.0, (h_upper - h_lower) / h_upper);
}

IntegralResult primal_dual_integral(const std::vector<TraceEvent>& trace,
                                    double t_lim) {
  IntegralResult out;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double prev = 0.0;
  for (std::size_t i = 0; i <= trace.size(); ++i) {
    double next = (i == trace.size())
                      ? t_lim
                      : std::min(trace[i].elapsed_seconds, t_lim);
    if (next > prev) {
      if (std::isfinite(ub) && std::isfinite(lb))
        out.theta += (ub - lb) * (next - prev);
      else
        out.excluded_seconds += next - prev;
      prev = next;
    }
    if (i < trace.size()) {
      ub = trace[i].h_upper;
      lb = trace[i].h_lower;
    }
    if (prev >= t_lim) break;
  }
  return out;
}

namespace {

struct Clock {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

double norm_sq(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

SolveResult run(const Instance& inst, const SolverConfig& config) {
  const VariationFlags flags = decode_variation(config.variation);
  SolveResult res;
  res.variation = config.variation;
  res.h_upper = std::numeric_limits<double>::infinity();
  res.h_lower = -std::numeric_limits<double>::infinity();

  Clock clock;
  auto now = [&]() -> double {
    return config.test_mode ? static_cast<double>(res.iterations)
                            : clock.seconds();
  };

  SolveLimits sub_limits;
  if (config.test_mode) {
    sub_limits.deterministic = true;
    sub_limits.max_nodes = 5000;
  } else {
    sub_limits.budget_seconds = config.per_subproblem_seconds;
  }

  std::vector<double> mu =
      config.warm_fit
          ? warm_start_multipliers(inst, *config.warm_fit)
          : std::vector<double>(inst.x_size(), 0.0);

  FlowSubproblem flow(inst, config.beta);
  DirectionState dir_state;
  ErgodicState ergodic = make_ergodic(inst, config.a);
  int sigma = config.sigma > 0
                  ? std::min(config.sigma, inst.num_ports)
                  : std::min(inst.num_ports,
                             std::max(2, (inst.num_ports + 9) / 10));
  double theta = config.theta0;
  int stall = 0;
  std::vector<std::vector<std::pair<int, int>>> carry;
  bool have_carry = false;

  auto record = [&](const std::string& source) {
    res.trace.push_back({now(), res.iterations,
                         res.h_upper, res.h_lower, source});
  };
  auto offer_incumbent = [&](const Schedule& sched, const ObjectiveValue& val,
                             const std::string& source) {
    if (res.has_schedule && val.scalarized >= res.value.scalarized) return;
    res.has_schedule = true;
    res.schedule = sched;
    res.value = val;
    res.h_upper = val.scalarized;
    record(source);
  };

  const int half = std::max(1, config.heu / 2);
  while (true) {
    if (!config.test_mode && clock.seconds() >= config.total_budget_seconds) {
      res.termination = "budget";
      break;
    }
    if (config.max_iterations >= 0 &&
        res.iterations >= config.max_iterations) {
      res.termination = config.test_mode ? "budget" : "iterations";
      break;
    }

    XSolution xsol;
    YSSolution ysol;
    std::string flow_error;
    std::thread worker([&] {
      try {
        flow.update_costs(mu);
        xsol = flow.solve();
      } catch (const FlowError& e) {
        flow_error = e.what();
      }
      ysol = solve_ys_timeblock(inst, reduced_costs(inst, mu, config.beta),
                                sub_limits, have_carry ? &carry : nullptr);
    });

    // stale-snapshot local search runs alongside the subproblems
    bool ls_due = flags.local_search && res.has_schedule &&
                  res.iterations % half == 0 && ergodic.iteration > 0;
    LocalSearchResult ls;
    if (ls_due) {
      Neighborhood nbhd =
          select_neighborhood(inst, ergodic.x_tilde, res.schedule, sigma);
      ls = local_search_step(inst, res.schedule, nbhd, sub_limits);
    }
    worker.join();

    if (!flow_error.empty()) {
      res.termination = "infeasible";
      break;
    }
    carry = ysol.chosen;
    have_carry = true;

    double h_mu = xsol.value + (ysol.status == SolveStatus::optimal
                                    ? ysol.value
                                    : ysol.lower_bound);
    if (h_mu > res.h_lower + 1e-12) {
      res.h_lower = h_mu;
      stall = 0;
      record("dual");
    } else if (++stall >= 10) {
      theta = std::max(theta / 2.0, 1e-4);
      stall = 0;
    }

    std::vector<double> g = subgradient(xsol.x, ysol.s);
    std::vector<double> d = flags.method == Method::MDS
                                ? mds_direction(g, dir_state)
                                : g;

    if (res.iterations % config.heu == 0) {
      if (flags.binpack) {
        BinpackResult pack = solve_binpack(inst, ysol.y, sub_limits);
        if (pack.feasible)
          offer_incumbent(pack.schedule, pack.value, "heuristic");
      } else {
        try {
          ExactResult proj = solve_fixed_switches(inst, ysol.y, sub_limits);
          if (proj.has_schedule)
            offer_incumbent(proj.schedule, proj.value, "heuristic");
        } catch (const ModelSizeError&) {
          // projection model too large for the bundled solver; skip
        }
      }
    }
    if (ls_due && ls.improved)
      offer_incumbent(ls.schedule, ls.value, "local_search");

    if (res.has_schedule &&
        gap_fraction(res.h_upper, res.h_lower) <= config.epsilon) {
      res.iterations++;
      res.termination = "gap";
      break;
    }

    double dd = norm_sq(d);
    if (dd <= 0) {
      res.iterations++;
      res.termination = "stalled";
      break;
    }
    // without an incumbent, aim at a surrogate target 30% above the current
    // dual value so the multipliers reach useful magnitudes quickly
    double tau = std::isfinite(res.h_upper)
                     ? polyak_step(theta, res.h_upper, h_mu, d)
                     : std::max(theta * std::max(0.3 * std::abs(h_mu), 1.0) / dd,
                                1e-8);
    mu = flags.reg ? projected_update(inst, mu, tau, g)
                   : plain_update(mu, tau, d);

    if (flags.local_search) update_ergodic(ergodic, xsol.x);
    res.iterations++;
  }

  res.multipliers = std::move(mu);
  res.gap = res.has_schedule || std::isfinite(res.h_upper)
                ? gap_fraction(res.h_upper, res.h_lower)
                : 1.0;
  return res;
}

std::vector<GridRow> run_variation_grid(const Instance& inst,
                                        const SolverConfig& base,
                                        const std::vector<int>& variations) {
  std::vector<GridRow> rows;
  for (int v : variations) {
    SolverConfig cfg = base;
    cfg.variation = v;
    GridRow row;
    row.variation = v;
    row.result = run(inst, cfg);
    rows.push_back(std::move(row));
  }
  double best_ub = std::numeric_limits<double>::infinity();
  double best_lb = -std::numeric_limits<double>::infinity();
  for (const GridRow& r : rows) {
    if (r.result.has_schedule) best_ub = std::min(best_ub, r.result.h_upper);
    if (std::isfinite(r.result.h_lower))
      best_lb = std::max(best_lb, r.result.h_lower);
  }
  for (GridRow& r : rows) {
    r.upper_increase_pct =
        (r.result.has_schedule && std::isfinite(best_ub) && best_ub != 0)
            ? 100.0 * (r.result.h_upper - best_ub) / best_ub
            : 100.0;
    r.lower_decrease_pct =
        (std::isfinite(r.result.h_lower) && std::isfinite(best_lb) &&
         best_lb != 0)
            ? 100.0 * (best_lb - r.result.h_lower) / std::abs(best_lb)
            : 100.0;
  }
  return rows;
}

}  // namespace swapsched
