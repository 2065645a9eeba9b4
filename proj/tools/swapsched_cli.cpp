#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "swapsched/driver.hpp"
#include "swapsched/dual.hpp"
#include "swapsched/exact_model.hpp"
#include "swapsched/flow.hpp"
#include "swapsched/instance.hpp"
#include "swapsched/report.hpp"
#include "swapsched/timeblock.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNoIncumbent = 4;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct SolveFlags {
  std::string instance_path;
  int variation = 2;
  double budget = 60.0;
  double beta = 0.5;
  int sigma = 0;
  double a = 4.0;
  int heu = 20;
  std::uint64_t seed = 0;
  long iterations = -1;
  bool test_mode = false;
  std::string warm_path;
  std::string summary_out, trace_out, schedule_out, gantt_out;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("instance", f.instance_path, "instance file")->required();
  cmd->add_option("--variation", f.variation, "strategy cell 1..16")
      ->check(CLI::Range(1, 16));
  cmd->add_option("--budget", f.budget, "wall-clock budget in seconds");
  cmd->add_option("--beta", f.beta, "price split between the two subproblems");
  cmd->add_option("--sigma", f.sigma, "local search neighborhood width");
  cmd->add_option("--a", f.a, "ergodic weight exponent");
  cmd->add_option("--heu", f.heu, "iterations between heuristic calls");
  cmd->add_option("--seed", f.seed, "run seed");
  cmd->add_option("--iterations", f.iterations, "iteration cap");
  cmd->add_flag("--test-mode", f.test_mode,
                "deterministic run budgeted by iterations, not wall time");
  cmd->add_option("--warm", f.warm_path, "warm start fit file");
  cmd->add_option("--summary", f.summary_out, "summary JSON path");
  cmd->add_option("--trace", f.trace_out, "trace CSV path");
  cmd->add_option("--schedule", f.schedule_out, "schedule CSV path");
  cmd->add_option("--gantt", f.gantt_out, "Gantt SVG path");
}

int run_solve(const SolveFlags& f) {
  swapsched::Instance inst = swapsched::load_instance_file(f.instance_path);
  swapsched::SolverConfig cfg;
  cfg.variation = f.variation;
  cfg.total_budget_seconds = f.budget;
  cfg.beta = f.beta;
  cfg.sigma = f.sigma;
  cfg.a = f.a;
  cfg.heu = f.heu;
  cfg.seed = f.seed;
  cfg.max_iterations = f.iterations;
  cfg.test_mode = f.test_mode;
  swapsched::RegressionFit fit;
  if (!f.warm_path.empty()) {
    fit = swapsched::load_fit_file(f.warm_path).fit;
    cfg.warm_fit = &fit;
  }

  swapsched::SolveResult res = swapsched::run(inst, cfg);
  std::string summary = swapsched::result_json(inst, res);
  std::cout << summary;
  if (!f.summary_out.empty()) write_file(f.summary_out, summary);
  if (!f.trace_out.empty())
    write_file(f.trace_out, swapsched::trace_csv(res.trace));
  if (res.has_schedule) {
    if (!f.schedule_out.empty())
      write_file(f.schedule_out, swapsched::schedule_csv(inst, res.schedule));
    if (!f.gantt_out.empty())
      write_file(f.gantt_out, swapsched::gantt_svg(inst, res.schedule));
  }
  if (res.termination == "infeasible") {
    std::cerr << "instance is infeasible: demand cannot be met\n";
    return kExitInfeasible;
  }
  if (!res.has_schedule) {
    std::cerr << "budget exhausted without a feasible schedule\n";
    return kExitNoIncumbent;
  }
  return 0;
}

int run_exact(const std::string& path, double budget,
              const std::string& schedule_out) {
  swapsched::Instance inst = swapsched::load_instance_file(path);
  swapsched::SolveLimits limits;
  limits.budget_seconds = budget;
  swapsched::ExactResult res;
  try {
    res = swapsched::solve_exact(inst, limits);
  } catch (const swapsched::ModelSizeError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }
  if (res.status == swapsched::SolveStatus::infeasible) {
    std::cerr << "instance is infeasible\n";
    return kExitInfeasible;
  }
  nlohmann::ordered_json doc;
  doc["status"] = res.status == swapsched::SolveStatus::optimal
                      ? "optimal"
                      : (res.has_schedule ? "feasible_timeout" : "timeout");
  doc["lower_bound"] = res.lower_bound;
  if (res.has_schedule) {
    doc["electricity_cost"] = res.value.electricity_cost;
    doc["switch_count"] = res.value.switch_count;
    doc["scalarized"] = res.value.scalarized;
    if (!schedule_out.empty())
      write_file(schedule_out, swapsched::schedule_csv(inst, res.schedule));
  }
  std::cout << doc.dump(2) << '\n';
  return res.has_schedule ? 0 : kExitNoIncumbent;
}

int run_sweep(const swapsched::GeneratorOptions& base,
              std::vector<int> gammas, std::vector<int> ports,
              std::vector<std::string> plans, const SolveFlags& f,
              const std::string& out_path) {
  if (gammas.empty() && ports.empty() && plans.empty())
    throw CLI::ValidationError("sweep",
                               "give at least one of --gammas/--ports/--plans");
  if (gammas.empty()) gammas = {base.gamma};
  if (ports.empty()) ports = {base.num_ports};
  if (plans.empty()) plans = {base.price_profile};

  std::ostringstream csv;
  csv << "gamma,N,plan,feasible,electricity_cost,switch_count,scalarized,"
         "h_lower,gap\n";
  for (int g : gammas)
    for (int n : ports)
      for (const std::string& plan : plans) {
        swapsched::GeneratorOptions opt = base;
        opt.gamma = g;
        opt.num_ports = n;
        opt.price_profile = plan;
        swapsched::Instance inst = swapsched::generate_instance(opt);
        swapsched::SolverConfig cfg;
        cfg.variation = f.variation;
        cfg.total_budget_seconds = f.budget;
        cfg.heu = f.heu;
        cfg.max_iterations = f.iterations;
        cfg.test_mode = f.test_mode;
        cfg.seed = f.seed;
        swapsched::SolveResult res = swapsched::run(inst, cfg);
        csv << g << ',' << n << ',' << plan << ','
            << (res.has_schedule ? 1 : 0) << ',';
        if (res.has_schedule)
          csv << res.value.electricity_cost << ',' << res.value.switch_count
              << ',' << res.value.scalarized;
        else
          csv << ",,";
        csv << ',' << res.h_lower << ',' << res.gap << '\n';
      }
  if (out_path.empty())
    std::cout << csv.str();
  else
    write_file(out_path, csv.str());
  return 0;
}

int run_learn(const swapsched::GeneratorOptions& opt, long iterations,
              double budget, const std::string& out_path) {
  swapsched::Instance inst = swapsched::generate_instance(opt);
  swapsched::SolverConfig cfg;
  cfg.variation = 2;
  if (iterations > 0) {
    cfg.test_mode = true;
    cfg.max_iterations = iterations;
  } else {
    cfg.total_budget_seconds = budget;
    cfg.per_subproblem_seconds = std::min(budget / 3.0, 15.0);
  }
  swapsched::SolveResult res = swapsched::run(inst, cfg);
  swapsched::FitDocument doc;
  doc.fit = swapsched::fit_regression(inst, res.multipliers);
  doc.source_batteries = inst.num_batteries;
  doc.source_ports = inst.num_ports;
  doc.source_gamma = inst.gamma;
  doc.source_periods = inst.num_periods;
  doc.iterations = static_cast<int>(res.iterations);
  swapsched::save_fit_file(doc, out_path);
  std::cout << "fit written to " << out_path << " after " << res.iterations
            << " iterations\n";
  return 0;
}

void add_generator_flags(CLI::App* cmd, swapsched::GeneratorOptions& opt,
                         bool required) {
  auto* b = cmd->add_option("--B", opt.num_batteries, "battery count");
  auto* n = cmd->add_option("--N", opt.num_ports, "port count");
  auto* g = cmd->add_option("--gamma", opt.gamma, "switch cap per boundary");
  if (required) {
    b->required();
    n->required();
    g->required();
  }
  cmd->add_option("--T", opt.num_periods, "planning periods");
  cmd->add_option("--L", opt.num_windows, "demand windows");
  cmd->add_option("--profile", opt.price_profile,
                  "price profile: base | extended | plan1 | plan2");
  cmd->add_option("--alpha", opt.alpha, "last-window charge fraction");
  cmd->add_option("--max-demand", opt.max_demand, "demand hour cap");
  cmd->add_option("--seed", opt.seed, "generator seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"battery swap charging scheduler"};
  app.require_subcommand(1);

  swapsched::GeneratorOptions gen_opt;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "write a random instance");
  add_generator_flags(gen, gen_opt, true);
  gen->add_option("-o,--output", gen_out, "instance path")->required();

  SolveFlags solve_flags;
  CLI::App* solve = app.add_subcommand("solve", "run the decomposition solver");
  add_solve_flags(solve, solve_flags);

  std::string exact_path, exact_schedule;
  double exact_budget = 60.0;
  CLI::App* exact = app.add_subcommand("exact", "solve the full model");
  exact->add_option("instance", exact_path, "instance file")->required();
  exact->add_option("--budget", exact_budget, "budget in seconds");
  exact->add_option("--schedule", exact_schedule, "schedule CSV path");

  swapsched::GeneratorOptions sweep_opt;
  sweep_opt.num_periods = 24;
  std::vector<int> sweep_gammas, sweep_ports;
  std::vector<std::string> sweep_plans;
  SolveFlags sweep_flags;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "sensitivity grid");
  add_generator_flags(sweep, sweep_opt, true);
  sweep->add_option("--gammas", sweep_gammas, "gamma values")->delimiter(',');
  sweep->add_option("--ports", sweep_ports, "port counts")->delimiter(',');
  sweep->add_option("--plans", sweep_plans, "price plans")->delimiter(',');
  sweep->add_option("--variation", sweep_flags.variation, "strategy cell");
  sweep->add_option("--budget", sweep_flags.budget, "budget per cell");
  sweep->add_option("--iterations", sweep_flags.iterations, "iteration cap");
  sweep->add_flag("--test-mode", sweep_flags.test_mode, "iteration budgets");
  sweep->add_option("-o,--output", sweep_out, "CSV path");

  swapsched::GeneratorOptions learn_opt;
  learn_opt.num_batteries = 20;
  learn_opt.num_ports = 10;
  learn_opt.gamma = 2;
  long learn_iterations = 0;
  double learn_budget = 60.0;
  std::string learn_out = "warmstart.json";
  CLI::App* learn =
      app.add_subcommand("learn", "fit warm start multipliers to prices");
  add_generator_flags(learn, learn_opt, false);
  learn->add_option("--iterations", learn_iterations,
                    "deterministic training iterations (0: wall-clock budget)");
  learn->add_option("--budget", learn_budget, "training budget in seconds");
  learn->add_option("-o,--output", learn_out, "fit path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      swapsched::save_instance_file(swapsched::generate_instance(gen_opt),
                                    gen_out);
      return 0;
    }
    if (*solve) return run_solve(solve_flags);
    if (*exact) return run_exact(exact_path, exact_budget, exact_schedule);
    if (*sweep)
      return run_sweep(sweep_opt, sweep_gammas, sweep_ports, sweep_plans,
                       sweep_flags, sweep_out);
    if (*learn)
      return run_learn(learn_opt, learn_iterations, learn_budget, learn_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const swapsched::ParseError& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
