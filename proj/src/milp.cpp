#include "swapsched/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <queue>
#include <sstream>

namespace swapsched {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-6;
}  // namespace

int BinaryProgram::add_variable(double objective_coef, std::string name) {
  obj_.push_back(objective_coef);
  if (name.empty()) name = "x" + std::to_string(obj_.size());
  names_.push_back(std::move(name));
  return static_cast<int>(obj_.size()) - 1;
}

void BinaryProgram::add_row(Row row) {
  for (int v : row.vars)
    if (v < 0 || v >= num_variables())
      throw std::out_of_range("row references unknown variable");
  rows_.push_back(std::move(row));
}

void BinaryProgram::set_warm_start(std::vector<std::uint8_t> assignment) {
  if (static_cast<int>(assignment.size()) != num_variables())
    throw std::invalid_argument("warm start has wrong length");
  warm_ = std::move(assignment);
}

double BinaryProgram::objective_of(const std::vector<std::uint8_t>& x) const {
  double v = 0;
  for (int j = 0; j < num_variables(); ++j)
    if (x[j]) v += obj_[j];
  return v;
}

bool BinaryProgram::satisfies(const std::vector<std::uint8_t>& x,
                              double tol) const {
  if (static_cast<int>(x.size()) != num_variables()) return false;
  for (const Row& r : rows_) {
    double act = 0;
    for (std::size_t i = 0; i < r.vars.size(); ++i)
      if (x[r.vars[i]]) act += r.coefs[i];
    switch (r.sense) {
      case RowSense::LE: if (act > r.rhs + tol) return false; break;
      case RowSense::GE: if (act < r.rhs - tol) return false; break;
      case RowSense::EQ: if (std::abs(act - r.rhs) > tol) return false; break;
    }
  }
  return true;
}

std::string BinaryProgram::to_lp_format() const {
  std::ostringstream os;
  os.precision(12);
  os << "Minimize\n obj:";
  bool any = false;
  for (int j = 0; j < num_variables(); ++j) {
    if (obj_[j] == 0.0) continue;
    os << (obj_[j] >= 0 ? " + " : " - ") << std::abs(obj_[j]) << " " << names_[j];
    any = true;
  }
  if (!any) os << " 0 " << (names_.empty() ? "x1" : names_[0]);
  os << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    const Row& r = rows_[i];
    os << " c" << (i + 1) << ":";
    for (std::size_t q = 0; q < r.vars.size(); ++q)
      os << (r.coefs[q] >= 0 ? " + " : " - ") << std::abs(r.coefs[q]) << " "
         << names_[r.vars[q]];
    switch (r.sense) {
      case RowSense::LE: os << " <= "; break;
      case RowSense::GE: os << " >= "; break;
      case RowSense::EQ: os << " = "; break;
    }
    os << r.rhs << "\n";
  }
  os << "Binary\n";
  for (const auto& n : names_) os << " " << n << "\n";
  os << "End\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Dense two-phase tableau simplex over 0 <= x <= 1 (bounds become rows).
// Only used for small models; larger relaxations go through dual ascent.
// ---------------------------------------------------------------------------

namespace {

struct SimplexInput {
  int n = 0;                      // structural variables
  std::vector<double> obj;
  std::vector<Row> rows;          // structural rows (bounds added internally)
};

struct SimplexResult {
  bool ok = false;                // solved to optimality
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

SimplexResult dense_simplex(const SimplexInput& in) {
  const int n = in.n;
  std::vector<Row> rows = in.rows;
  for (int j = 0; j < n; ++j)
    rows.push_back({{j}, {1.0}, RowSense::LE, 1.0});
  const int m = static_cast<int>(rows.size());

  // Normalise rhs >= 0, count extra columns.
  std::vector<int> slack(m, -1), art(m, -1);
  int ncols = n;
  for (int i = 0; i < m; ++i) {
    Row& r = rows[i];
    if (r.rhs < 0) {
      for (double& c : r.coefs) c = -c;
      r.rhs = -r.rhs;
      if (r.sense == RowSense::LE) r.sense = RowSense::GE;
      else if (r.sense == RowSense::GE) r.sense = RowSense::LE;
    }
    if (r.sense != RowSense::EQ) slack[i] = ncols++;
    if (r.sense != RowSense::LE) art[i] = ncols++;
  }

  std::vector<std::vector<double>> T(m, std::vector<double>(ncols + 1, 0.0));
  std::vector<int> basis(m, -1);
  for (int i = 0; i < m; ++i) {
    const Row& r = rows[i];
    for (std::size_t q = 0; q < r.vars.size(); ++q)
      T[i][r.vars[q]] += r.coefs[q];
    if (slack[i] >= 0) T[i][slack[i]] = (r.sense == RowSense::LE) ? 1.0 : -1.0;
    if (art[i] >= 0) T[i][art[i]] = 1.0;
    T[i][ncols] = r.rhs;
    basis[i] = (r.sense == RowSense::LE) ? slack[i] : art[i];
  }

  std::vector<double> cost(ncols, 0.0);
  std::vector<char> is_art(ncols, 0);
  std::vector<char> row_dead(m, 0);  // redundant rows retired after phase 1
  for (int i = 0; i < m; ++i)
    if (art[i] >= 0) is_art[art[i]] = 1;
  SimplexResult out;

  auto run_phase = [&](bool allow_art) -> bool {
    // Reduced-cost row rebuilt from the basis each phase.
    std::vector<double> z(ncols + 1, 0.0);
    for (int j = 0; j < ncols; ++j) z[j] = cost[j];
    for (int i = 0; i < m; ++i) {
      if (row_dead[i]) continue;
      double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= ncols; ++j) z[j] -= cb * T[i][j];
    }
    long iter_cap = 200L * (m + ncols) + 2000;
    int degenerate_streak = 0;
    for (long it = 0; it < iter_cap; ++it) {
      bool bland = degenerate_streak > 2 * m;
      int enter = -1;
      double best = -1e-9;
      for (int j = 0; j < ncols; ++j) {
        if (!allow_art && is_art[j]) continue;
        if (z[j] < best) {
          if (bland) { enter = j; break; }
          best = z[j];
          enter = j;
        } else if (bland && z[j] < -1e-9) { enter = j; break; }
      }
      if (enter < 0) return true;  // optimal for this phase
      int leave = -1;
      double ratio = kInf;
      for (int i = 0; i < m; ++i) {
        if (row_dead[i]) continue;
        if (T[i][enter] > 1e-9) {
          double r = T[i][ncols] / T[i][enter];
          if (r < ratio - 1e-12 ||
              (r < ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return true;  // unbounded direction; cannot happen boxed
      if (ratio < 1e-12) degenerate_streak++; else degenerate_streak = 0;
      // Pivot.
      double piv = T[leave][enter];
      for (int j = 0; j <= ncols; ++j) T[leave][j] /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave || row_dead[i]) continue;
        double f = T[i][enter];
        if (f == 0.0) continue;
        for (int j = 0; j <= ncols; ++j) T[i][j] -= f * T[leave][j];
      }
      double f = z[enter];
      if (f != 0.0)
        for (int j = 0; j <= ncols; ++j) z[j] -= f * T[leave][j];
      basis[leave] = enter;
    }
    return false;  // iteration cap
  };

  // Phase 1.
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i)
    if (art[i] >= 0) { need_phase1 = true; break; }
  if (need_phase1) {
    std::fill(cost.begin(), cost.end(), 0.0);
    for (int i = 0; i < m; ++i)
      if (art[i] >= 0) cost[art[i]] = 1.0;
    if (!run_phase(true)) return out;
    double p1 = 0;
    for (int i = 0; i < m; ++i)
      if (cost[basis[i]] != 0.0) p1 += T[i][ncols];
    if (p1 > 1e-7) {
      out.ok = true;
      out.feasible = false;
      return out;
    }
    // Kick basic artificials (all at zero level now) out of the basis;
    // rows where that is impossible are linearly dependent and retire.
    for (int i = 0; i < m; ++i) {
      if (!is_art[basis[i]]) continue;
      int enter = -1;
      for (int j = 0; j < ncols; ++j)
        if (!is_art[j] && std::abs(T[i][j]) > 1e-7) { enter = j; break; }
      if (enter < 0) {
        row_dead[i] = 1;
        continue;
      }
      double piv = T[i][enter];
      for (int j = 0; j <= ncols; ++j) T[i][j] /= piv;
      for (int q = 0; q < m; ++q) {
        if (q == i || row_dead[q]) continue;
        double f = T[q][enter];
        if (f == 0.0) continue;
        for (int j = 0; j <= ncols; ++j) T[q][j] -= f * T[i][j];
      }
      basis[i] = enter;
    }
  }

  // Phase 2: artificial columns are barred from re-entering.
  std::fill(cost.begin(), cost.end(), 0.0);
  for (int j = 0; j < n; ++j) cost[j] = in.obj[j];
  if (!run_phase(false)) return out;

  out.ok = true;
  out.feasible = true;
  out.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = T[i][ncols];
  for (int j = 0; j < n; ++j) out.x[j] = std::clamp(out.x[j], 0.0, 1.0);
  out.value = 0;
  for (int j = 0; j < n; ++j) out.value += in.obj[j] * out.x[j];
  return out;
}

}  // namespace

LpResult solve_lp_relaxation(const BinaryProgram& prog) {
  SimplexInput in;
  in.n = prog.num_variables();
  in.obj = prog.objective();
  in.rows = prog.rows();
  SimplexResult r = dense_simplex(in);
  if (!r.ok) throw std::runtime_error("simplex iteration limit reached");
  LpResult out;
  out.feasible = r.feasible;
  out.value = r.value;
  out.x = std::move(r.x);
  return out;
}

// ---------------------------------------------------------------------------
// Bundled branch and bound.
// ---------------------------------------------------------------------------

namespace {

// One fixing state: -1 free, 0/1 fixed.
using FixVec = std::vector<std::int8_t>;

struct WorkingModel {
  const BinaryProgram* prog = nullptr;
  int n = 0;
  // Rows normalised: GE flipped into LE; EQ kept with both checks.
  std::vector<Row> rows;
  std::vector<std::vector<int>> rows_of_var;
  bool use_lp = false;

  explicit WorkingModel(const BinaryProgram& p) : prog(&p), n(p.num_variables()) {
    rows.reserve(p.num_rows());
    for (Row r : p.rows()) {
      if (r.sense == RowSense::GE) {
        for (double& c : r.coefs) c = -c;
        r.rhs = -r.rhs;
        r.sense = RowSense::LE;
      }
      rows.push_back(std::move(r));
    }
    rows_of_var.resize(n);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      for (int v : rows[i].vars) rows_of_var[v].push_back(i);
    long nnz = 0;
    for (const Row& r : rows) nnz += static_cast<long>(r.vars.size());
    use_lp = n <= 320 && static_cast<int>(rows.size()) <= 480 && nnz <= 20000;
  }
};

// Activity-bound propagation to a fixpoint. Returns false on conflict.
bool propagate(const WorkingModel& wm, FixVec& fix) {
  std::vector<char> dirty_row(wm.rows.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < wm.rows.size(); ++i) {
      if (!dirty_row[i]) continue;
      dirty_row[i] = 0;
      const Row& r = wm.rows[i];
      double min_act = 0, max_act = 0;
      for (std::size_t q = 0; q < r.vars.size(); ++q) {
        double a = r.coefs[q];
        std::int8_t f = fix[r.vars[q]];
        if (f < 0) {
          min_act += std::min(a, 0.0);
          max_act += std::max(a, 0.0);
        } else if (f == 1) {
          min_act += a;
          max_act += a;
        }
      }
      bool le = true, ge = r.sense == RowSense::EQ;
      if (le && min_act > r.rhs + kFeasTol) return false;
      if (ge && max_act < r.rhs - kFeasTol) return false;
      for (std::size_t q = 0; q < r.vars.size(); ++q) {
        int v = r.vars[q];
        if (fix[v] >= 0) continue;
        double a = r.coefs[q];
        std::int8_t force = -1;
        if (le) {
          if (a > 0 && min_act + a > r.rhs + kFeasTol) force = 0;
          if (a < 0 && min_act - a > r.rhs + kFeasTol) force = 1;
        }
        if (ge && force < 0) {
          if (a > 0 && max_act - a < r.rhs - kFeasTol) force = 1;
          if (a < 0 && max_act + a < r.rhs - kFeasTol) force = 0;
        }
        if (force >= 0) {
          fix[v] = force;
          changed = true;
          for (int ri : wm.rows_of_var[v]) dirty_row[ri] = 1;
          if (force == 1) { min_act += std::max(a, 0.0); max_act += std::min(a, 0.0); }
          else { min_act -= std::min(a, 0.0); max_act -= std::max(a, 0.0); }
          if (le && min_act > r.rhs + kFeasTol) return false;
          if (ge && max_act < r.rhs - kFeasTol) return false;
        }
      }
    }
  }
  return true;
}

struct Relaxation {
  double bound = -kInf;
  bool feasible_relax = true;          // relaxation itself infeasible -> prune
  std::vector<double> x;               // relaxed point (may be fractional)
};

// Lagrangian dual ascent: every evaluation is a valid lower bound.
struct DualAscent {
  std::vector<double> nu;  // per row; >=0 for LE, free for EQ

  Relaxation run(const WorkingModel& wm, const FixVec& fix, int iters,
                 double ub_hint) {
    const auto& rows = wm.rows;
    if (nu.empty()) nu.assign(rows.size(), 0.0);
    std::vector<double> ctil(wm.n), g(rows.size());
    std::vector<double> best_x(wm.n, 0.0);
    double bestL = -kInf;
    double lambda = 2.0;
    int stall = 0;
    std::vector<double> nu_best = nu;
    for (int it = 0; it < iters; ++it) {
      for (int j = 0; j < wm.n; ++j) ctil[j] = wm.prog->objective()[j];
      double L = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        double v = nu[i];
        if (v != 0.0) {
          for (std::size_t q = 0; q < r.vars.size(); ++q)
            ctil[r.vars[q]] += v * r.coefs[q];
          L -= v * r.rhs;
        }
      }
      std::vector<double> xhat(wm.n);
      for (int j = 0; j < wm.n; ++j) {
        double xv = fix[j] >= 0 ? fix[j] : (ctil[j] < 0 ? 1.0 : 0.0);
        xhat[j] = xv;
        L += ctil[j] * xv;
      }
      if (L > bestL) {
        bestL = L;
        best_x = xhat;
        nu_best = nu;
        stall = 0;
      } else if (++stall >= 5) {
        lambda *= 0.5;
        stall = 0;
      }
      if (it + 1 == iters) break;
      double gnorm2 = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        double act = 0;
        for (std::size_t q = 0; q < r.vars.size(); ++q)
          act += r.coefs[q] * xhat[r.vars[q]];
        double gi = act - r.rhs;
        if (r.sense == RowSense::LE && nu[i] <= 0.0 && gi < 0) gi = 0;
        g[i] = gi;
        gnorm2 += gi * gi;
      }
      if (gnorm2 < 1e-16) break;
      double target = std::isfinite(ub_hint) ? ub_hint
                                             : bestL + 0.05 * (1 + std::abs(bestL));
      double tau = lambda * std::max(target - bestL, 1e-6) / gnorm2;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        nu[i] += tau * g[i];
        if (rows[i].sense == RowSense::LE && nu[i] < 0) nu[i] = 0;
      }
    }
    nu = nu_best;
    Relaxation rel;
    rel.bound = bestL;
    rel.x = std::move(best_x);
    return rel;
  }
};

Relaxation relax_bound(const WorkingModel& wm, const FixVec& fix,
                       DualAscent& da, int ascent_iters, double ub_hint) {
  if (wm.use_lp) {
    SimplexInput in;
    in.n = wm.n;
    in.obj = wm.prog->objective();
    in.rows.reserve(wm.rows.size() + wm.n);
    for (const Row& r : wm.rows) in.rows.push_back(r);
    for (int j = 0; j < wm.n; ++j) {
      if (fix[j] == 0) in.rows.push_back({{j}, {1.0}, RowSense::LE, 0.0});
      else if (fix[j] == 1) in.rows.push_back({{j}, {1.0}, RowSense::GE, 1.0});
    }
    SimplexResult r = dense_simplex(in);
    if (r.ok) {
      Relaxation rel;
      rel.feasible_relax = r.feasible;
      rel.bound = r.feasible ? r.value : kInf;
      rel.x = std::move(r.x);
      return rel;
    }
    // fall through to ascent on a simplex cap (rare)
  }
  return da.run(wm, fix, ascent_iters, ub_hint);
}

// Rounds/repairs a relaxed point into a feasible assignment if it can.
std::optional<std::vector<std::uint8_t>> repair(const WorkingModel& wm,
                                                const FixVec& fix,
                                                const std::vector<double>& relax) {
  const auto& obj = wm.prog->objective();
  std::vector<std::uint8_t> x(wm.n, 0);
  for (int j = 0; j < wm.n; ++j)
    x[j] = fix[j] >= 0 ? static_cast<std::uint8_t>(fix[j])
                       : (relax[j] > 0.5 ? 1 : 0);
  std::vector<double> act(wm.rows.size(), 0.0);
  auto recompute = [&](std::size_t i) {
    const Row& r = wm.rows[i];
    double a = 0;
    for (std::size_t q = 0; q < r.vars.size(); ++q)
      if (x[r.vars[q]]) a += r.coefs[q];
    act[i] = a;
  };
  for (std::size_t i = 0; i < wm.rows.size(); ++i) recompute(i);

  int budget = 4 * wm.n + 200;
  while (budget-- > 0) {
    // most violated row first
    int worst = -1;
    double worst_v = kFeasTol;
    for (std::size_t i = 0; i < wm.rows.size(); ++i) {
      const Row& r = wm.rows[i];
      double v = 0;
      if (act[i] > r.rhs + kFeasTol) v = act[i] - r.rhs;
      else if (r.sense == RowSense::EQ && act[i] < r.rhs - kFeasTol)
        v = r.rhs - act[i];
      if (v > worst_v) { worst_v = v; worst = static_cast<int>(i); }
    }
    if (worst < 0) break;  // feasible
    const Row& r = wm.rows[worst];
    bool need_down = act[worst] > r.rhs;  // else EQ row short of rhs
    int pick = -1;
    double pick_score = kInf;
    for (std::size_t q = 0; q < r.vars.size(); ++q) {
      int v = r.vars[q];
      if (fix[v] >= 0) continue;
      double a = r.coefs[q];
      double gain = need_down ? (x[v] ? a : -a) : (x[v] ? -a : a);
      if (gain <= 1e-12) continue;  // flipping does not reduce the violation
      double dobj = x[v] ? -obj[v] : obj[v];
      double score = dobj / gain;
      if (score < pick_score) { pick_score = score; pick = v; }
    }
    if (pick < 0) return std::nullopt;  // stuck
    x[pick] ^= 1;
    for (int ri : wm.rows_of_var[pick]) recompute(ri);
  }
  if (!wm.prog->satisfies(x)) return std::nullopt;
  return x;
}

struct Node {
  int parent = -1;
  int var = -1;
  std::int8_t val = 0;
  double bound = -kInf;
};

}  // namespace

SolveOutcome solve(const BinaryProgram& prog, const SolveLimits& limits) {
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  SolveOutcome out;
  WorkingModel wm(prog);
  const int n = wm.n;

  double ub = kInf;
  std::vector<std::uint8_t> best;
  if (prog.warm_start() && prog.satisfies(*prog.warm_start())) {
    best = *prog.warm_start();
    ub = prog.objective_of(best);
  }

  double trivial_lb = 0.0;  // ignore every row: sum of negative coefficients
  for (double c : prog.objective()) trivial_lb += std::min(0.0, c);

  std::vector<Node> arena;
  arena.push_back({});
  arena[0].bound = trivial_lb;
  // Best-first heap of (bound, id); parallel stack for the DFS fallback.
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> heap;
  std::vector<int> stack;
  std::vector<char> done;
  heap.push({trivial_lb, 0});
  stack.push_back(0);
  done.push_back(0);

  DualAscent da_root;
  bool root_done = false;
  std::uint64_t nodes = 0;
  FixVec fix;
  bool out_of_budget = false;
  double dropped_lb = kInf;  // bound of a node abandoned mid-processing

  auto gap_closed = [&](double lb) {
    if (!std::isfinite(ub)) return false;
    return ub - lb <= limits.relative_gap * std::max(1.0, std::abs(ub)) + 1e-9;
  };
  auto open_min_bound = [&]() {
    while (!heap.empty() && done[heap.top().second]) heap.pop();
    return heap.empty() ? kInf : heap.top().first;
  };

  while (true) {
    double frontier = open_min_bound();
    if (gap_closed(frontier)) break;  // everything left is within the target

    bool dfs_mode = heap.size() > 1000000;
    int id = -1;
    if (dfs_mode) {
      while (!stack.empty() && done[stack.back()]) stack.pop_back();
      if (!stack.empty()) { id = stack.back(); stack.pop_back(); }
    }
    if (id < 0) {
      if (heap.empty()) break;
      id = heap.top().second;
      heap.pop();
    }
    done[id] = 1;
    if (std::isfinite(ub) && arena[id].bound >= ub - 1e-9) continue;
    if ((!limits.deterministic && elapsed() > limits.budget_seconds) ||
        (limits.max_nodes >= 0 &&
         static_cast<std::int64_t>(nodes) >= limits.max_nodes)) {
      out_of_budget = true;
      dropped_lb = arena[id].bound;
      break;
    }
    ++nodes;

    // Rebuild the fixing state along the ancestor path.
    fix.assign(n, -1);
    for (int cur = id; cur > 0; cur = arena[cur].parent)
      fix[arena[cur].var] = arena[cur].val;
    if (!propagate(wm, fix)) continue;

    int ascent_iters = root_done ? 40 : 300;
    DualAscent da = da_root;  // warm-start multipliers from the root
    Relaxation rel = relax_bound(wm, fix, da, ascent_iters, ub);
    if (!root_done) { da_root = da; root_done = true; }
    if (!rel.feasible_relax) continue;
    double node_lb = std::max(rel.bound, arena[id].bound);
    if (std::isfinite(ub) && node_lb >= ub - 1e-9) continue;

    // Try to turn the relaxed point into an incumbent.
    if (auto cand = repair(wm, fix, rel.x)) {
      double v = prog.objective_of(*cand);
      if (v < ub - 1e-12) { ub = v; best = std::move(*cand); }
    }

    // Branch variable: lowest-index fractional one; for binary relaxed
    // points, the lowest-index free variable in a violated row.
    int branch = -1;
    for (int j = 0; j < n; ++j)
      if (fix[j] < 0 && rel.x[j] > 1e-6 && rel.x[j] < 1 - 1e-6) {
        branch = j;
        break;
      }
    if (branch < 0) {
      std::vector<std::uint8_t> xi(n, 0);
      for (int j = 0; j < n; ++j)
        xi[j] = fix[j] >= 0 ? fix[j] : (rel.x[j] > 0.5 ? 1 : 0);
      if (prog.satisfies(xi)) {
        double v = prog.objective_of(xi);
        if (v < ub - 1e-12) { ub = v; best = std::move(xi); }
        continue;  // relaxed point integral and feasible: node solved
      }
      for (const Row& r : wm.rows) {
        double act = 0;
        for (std::size_t q = 0; q < r.vars.size(); ++q)
          if (xi[r.vars[q]]) act += r.coefs[q];
        bool viol = act > r.rhs + kFeasTol ||
                    (r.sense == RowSense::EQ && act < r.rhs - kFeasTol);
        if (!viol) continue;
        for (int v : r.vars)
          if (fix[v] < 0 && (branch < 0 || v < branch)) branch = v;
        if (branch >= 0) break;
      }
      if (branch < 0)
        for (int j = 0; j < n; ++j)
          if (fix[j] < 0) { branch = j; break; }
      if (branch < 0) continue;  // fully fixed yet infeasible: dead end
    }
    for (std::int8_t v : {std::int8_t(1), std::int8_t(0)}) {
      Node child;
      child.parent = id;
      child.var = branch;
      child.val = v;
      child.bound = node_lb;
      int cid = static_cast<int>(arena.size());
      arena.push_back(child);
      done.push_back(0);
      heap.push({node_lb, cid});
      stack.push_back(cid);
    }
  }

  double lb = std::min({open_min_bound(), dropped_lb, ub});
  out.nodes = nodes;
  out.elapsed_seconds = elapsed();
  if (!best.empty()) {
    out.assignment = std::move(best);
    out.objective = ub;
    out.lower_bound = std::isfinite(lb) ? lb : ub;
    out.status = (!out_of_budget || gap_closed(out.lower_bound))
                     ? SolveStatus::optimal
                     : SolveStatus::feasible_timeout;
  } else if (out_of_budget) {
    out.status = SolveStatus::no_solution_timeout;
    out.lower_bound = std::isfinite(lb) ? lb : -kInf;
  } else {
    out.status = SolveStatus::infeasible;
    out.objective = kInf;
    out.lower_bound = kInf;
  }
  return out;
}

// ---- backend seam ----

namespace {
std::map<std::string, BackendFn>& backend_registry() {
  static std::map<std::string, BackendFn> reg;
  return reg;
}
}  // namespace

void register_backend(const std::string& name, BackendFn fn) {
  backend_registry()[name] = std::move(fn);
}

bool backend_registered(const std::string& name) {
  return backend_registry().count(name) > 0;
}

SolveOutcome solve_with_backend(const std::string& name,
                                const BinaryProgram& prog,
                                const SolveLimits& limits) {
  auto it = backend_registry().find(name);
  if (it == backend_registry().end())
    throw BackendError("MILP backend '" + name +
                       "' is not registered in this build");
  return it->second(prog, limits);
}

std::string configured_backend() {
  const char* env = std::getenv("SWAPSCHED_BACKEND");
  return env ? std::string(env) : std::string();
}

}  // namespace swapsched
