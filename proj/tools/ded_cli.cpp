// Command line driver: solve / validate / eval-cost / linearize / oracle /
// duplicate / gen.  Exit codes: 0 success, 1 infeasible or limit hit,
// 2 usage or parse errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ded/bnb.hpp"
#include "ded/cost.hpp"
#include "ded/instance_io.hpp"
#include "ded/milp.hpp"
#include "ded/oracle.hpp"
#include "ded/piecewise.hpp"
#include "ded/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInfeasibleOrLimit = 1;
constexpr int kUsage = 2;

std::vector<ded::PiecewiseCost> linearize_all(const ded::SystemInstance& sys,
                                              int m) {
  std::vector<ded::PiecewiseCost> pwcs;
  pwcs.reserve(sys.units.size());
  for (const ded::GeneratorUnit& u : sys.units)
    pwcs.push_back(ded::build_piecewise(u, m));
  return pwcs;
}

std::string config_echo(int m, const ded::SolverConfig& cfg) {
  std::ostringstream out;
  out << "m_segments=" << m << " rgap_target=" << cfg.rgap_target
      << " threads=" << cfg.threads << " seed=" << cfg.seed;
  if (std::isfinite(cfg.time_limit)) out << " time_limit=" << cfg.time_limit;
  return out.str();
}

int run_solve(const std::string& inst_path, int m, ded::SolverConfig cfg,
              const std::string& out_path, const std::string& dump_path,
              bool trace) {
  if (trace) cfg.trace = &std::cerr;
  const ded::SystemInstance sys = ded::parse_instance(inst_path);
  const ded::MilpInstance milp = ded::build_milp(sys, linearize_all(sys, m));
  if (!dump_path.empty()) {
    std::ofstream dump(dump_path, std::ios::binary);
    if (!dump) throw std::runtime_error("cannot write " + dump_path);
    ded::write_milp(milp, dump);
    std::printf("model with %d columns / %d rows written to %s\n",
                milp.num_cols, milp.num_rows(), dump_path.c_str());
  }

  const ded::BnbResult res = ded::solve_milp(milp, cfg);

  ded::SolveMeta meta;
  meta.status = ded::to_string(res.status);
  meta.best_bound = res.best_bound;
  meta.rgap = res.achieved_rgap;
  meta.nodes = res.nodes_processed;
  meta.wall_time = res.wall_time;
  meta.config = config_echo(m, cfg);

  std::optional<ded::Schedule> sched;
  if (res.incumbent) {
    meta.milp_objective = res.incumbent_obj;
    sched = ded::extract_solution(milp, *res.incumbent, sys);
    const double z = ded::schedule_cost(sys, *sched);
    std::printf("status          %s\n", meta.status.c_str());
    std::printf("cost            %.2f\n", z);
    std::printf("milp objective  %.2f\n", res.incumbent_obj);
    std::printf("best bound      %.2f\n", res.best_bound);
    std::printf("rgap            %.6f\n", res.achieved_rgap);
    if (res.best_bound > 0.0)
      std::printf("ogap            %.6f\n",
                  ded::optimality_gap(z, res.best_bound));
    std::printf("nodes           %ld\n", res.nodes_processed);
    std::printf("wall time       %.2f s\n", res.wall_time);
  } else {
    std::printf("status          %s\n", meta.status.c_str());
    std::printf("nodes           %ld\n", res.nodes_processed);
    std::printf("wall time       %.2f s\n", res.wall_time);
  }
  if (!out_path.empty()) {
    ded::write_solution(sys, sched, meta, out_path);
    std::printf("solution written to %s\n", out_path.c_str());
  }
  return res.status == ded::MilpStatus::GapReached ||
                 res.status == ded::MilpStatus::Optimal
             ? kOk
             : kInfeasibleOrLimit;
}

int run_validate(const std::string& inst_path, const std::string& sol_path,
                 double tol) {
  const ded::SystemInstance sys = ded::parse_instance(inst_path);
  const ded::SolutionFile sol = ded::parse_solution(sol_path);
  if (!sol.schedule)
    throw std::runtime_error(sol_path + " carries no schedule to validate");
  const ded::ViolationReport rep =
      ded::validate_schedule(sys, *sol.schedule, tol);
  if (rep.feasible()) {
    std::printf("feasible within %g MW\n", tol);
    return kOk;
  }
  std::printf("%zu violation(s), worst %.4f MW beyond limits (tol %g)\n",
              rep.violations.size(), rep.worst, tol);
  const size_t shown = std::min<size_t>(rep.violations.size(), 20);
  for (size_t v = 0; v < shown; ++v) {
    const ded::Violation& viol = rep.violations[v];
    std::printf("  %-17s period %-3d", ded::to_string(viol.kind),
                viol.period + 1);
    if (viol.unit >= 0) std::printf(" unit %-3d", sys.units[viol.unit].id);
    if (viol.product >= 0) std::printf(" reserve %d", viol.product + 1);
    std::printf("  by %.4f MW\n", viol.magnitude);
  }
  if (shown < rep.violations.size())
    std::printf("  ... %zu more\n", rep.violations.size() - shown);
  return kInfeasibleOrLimit;
}

int run_eval_cost(const std::string& inst_path, const std::string& sol_path) {
  const ded::SystemInstance sys = ded::parse_instance(inst_path);
  const ded::SolutionFile sol = ded::parse_solution(sol_path);
  if (!sol.schedule)
    throw std::runtime_error(sol_path + " carries no schedule to price");
  const double z = ded::schedule_cost(sys, *sol.schedule);
  std::printf("cost %.2f\n", z);
  if (std::isfinite(sol.meta.milp_objective))
    std::printf("milp objective %.2f (cost - milp = %.4f)\n",
                sol.meta.milp_objective, z - sol.meta.milp_objective);
  if (std::isfinite(sol.meta.best_bound) && sol.meta.best_bound > 0.0)
    std::printf("ogap %.6f against bound %.2f\n",
                ded::optimality_gap(z, sol.meta.best_bound),
                sol.meta.best_bound);
  return kOk;
}

int run_linearize(const std::string& inst_path, int m) {
  const ded::SystemInstance sys = ded::parse_instance(inst_path);
  for (const ded::GeneratorUnit& u : sys.units) {
    const ded::PiecewiseCost pwc = ded::build_piecewise(u, m);
    const ded::ApproxErrorReport rep =
        ded::approx_error_report(u, pwc, 10 * pwc.num_segments() + 1);
    std::printf("unit %d: segments=%d max_under=%.6f max_over=%.3g %s\n", u.id,
                pwc.num_segments(), rep.max_under, rep.max_over,
                rep.is_lower_approx ? "lower-approx" : "NOT-lower-approx");
    for (int l = 0; l < pwc.num_segments(); ++l)
      std::printf("  seg %d: [%.4f, %.4f]  k=%.6f  b=%.6f\n", l + 1,
                  pwc.breakpoints[l], pwc.breakpoints[l + 1], pwc.slopes[l],
                  pwc.intercepts[l]);
  }
  return kOk;
}

int run_oracle(const std::string& inst_path, int m) {
  const ded::SystemInstance sys = ded::parse_instance(inst_path);
  const ded::MilpInstance milp = ded::build_milp(sys, linearize_all(sys, m));
  const ded::BnbResult res = ded::enumerate_solve(milp);
  std::printf("assignments %ld\n", res.nodes_processed);
  if (!res.incumbent) {
    std::printf("status infeasible\n");
    return kInfeasibleOrLimit;
  }
  const ded::Schedule sched =
      ded::extract_solution(milp, *res.incumbent, sys);
  std::printf("status optimal\nmilp objective %.6f\ncost %.6f\n",
              res.incumbent_obj, ded::schedule_cost(sys, sched));
  return kOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"dynamic economic dispatch with valve-point MILP relaxation"};
  app.require_subcommand(1);

  std::string inst_path, sol_path, out_path, dump_path;
  int m = 2;
  ded::SolverConfig cfg;
  bool trace = false;
  std::string branch = "most-fractional", select = "best-bound";
  double tol = 0.01;
  std::uint64_t gen_seed = 1;
  int gen_units = 2, gen_periods = 3;

  CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("instance", inst_path)->required();
  solve->add_option("--m-segments", m, "segments per sine half-period")
      ->check(CLI::PositiveNumber);
  solve->add_option("--rgap", cfg.rgap_target, "relative MILP gap target");
  solve->add_option("--time-limit", cfg.time_limit, "seconds");
  solve->add_option("--node-limit", cfg.node_limit);
  solve->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
  solve->add_option("--seed", cfg.seed);
  solve->add_option("--feas-tol", cfg.feasibility_tol);
  solve->add_option("--int-tol", cfg.integrality_tol);
  solve
      ->add_option_function<std::string>(
          "--branch",
          [&cfg](const std::string& v) {
            cfg.branching_rule = v == "pseudocost"
                                     ? ded::BranchRule::PseudoCost
                                     : ded::BranchRule::MostFractional;
          },
          "most-fractional|pseudocost")
      ->check(CLI::IsMember({"most-fractional", "pseudocost"}));
  solve
      ->add_option_function<std::string>(
          "--select",
          [&cfg](const std::string& v) {
            cfg.node_selection = v == "dfs" ? ded::NodeSelection::DepthFirstPlunge
                                            : ded::NodeSelection::BestBound;
          },
          "best-bound|dfs")
      ->check(CLI::IsMember({"best-bound", "dfs"}));
  solve->add_option("--out", out_path, "solution file path");
  solve->add_option("--dump-model", dump_path, "interchange model dump path");
  solve->add_flag("--trace", trace, "log node events to stderr");

  CLI::App* validate =
      app.add_subcommand("validate", "check a solution against an instance");
  validate->add_option("instance", inst_path)->required();
  validate->add_option("solution", sol_path)->required();
  validate->add_option("--tol", tol, "MW tolerance");

  CLI::App* evalc =
      app.add_subcommand("eval-cost", "price a solution's schedule");
  evalc->add_option("instance", inst_path)->required();
  evalc->add_option("solution", sol_path)->required();

  CLI::App* lin =
      app.add_subcommand("linearize", "per-unit piecewise report");
  lin->add_option("instance", inst_path)->required();
  lin->add_option("--m-segments", m)->check(CLI::PositiveNumber);

  CLI::App* oracle =
      app.add_subcommand("oracle", "brute-force optimum of a tiny instance");
  oracle->add_option("instance", inst_path)->required();
  oracle->add_option("--m-segments", m)->check(CLI::PositiveNumber);

  CLI::App* dup = app.add_subcommand("duplicate", "replicate a system k times");
  dup->add_option("instance", inst_path)->required();
  int dup_k = 1;
  dup->add_option("-k,--factor", dup_k)->required()->check(CLI::PositiveNumber);
  dup->add_option("--out", out_path)->required();

  CLI::App* gen = app.add_subcommand("gen", "emit a random instance");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--units", gen_units)->check(CLI::PositiveNumber);
  gen->add_option("--periods", gen_periods)->check(CLI::PositiveNumber);
  gen->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kUsage;
  }

  try {
    if (*solve)
      return run_solve(inst_path, m, cfg, out_path, dump_path, trace);
    if (*validate) return run_validate(inst_path, sol_path, tol);
    if (*evalc) return run_eval_cost(inst_path, sol_path);
    if (*lin) return run_linearize(inst_path, m);
    if (*oracle) return run_oracle(inst_path, m);
    if (*dup) {
      const ded::SystemInstance sys = ded::parse_instance(inst_path);
      ded::write_instance(ded::duplicate_system(sys, dup_k), out_path);
      std::printf("%d-unit system written to %s\n",
                  sys.num_units() * dup_k, out_path.c_str());
      return kOk;
    }
    if (*gen) {
      const ded::SystemInstance sys =
          ded::random_instance(gen_seed, gen_units, gen_periods);
      if (out_path.empty()) {
        std::fputs(ded::instance_to_text(sys).c_str(), stdout);
      } else {
        ded::write_instance(sys, out_path);
        std::printf("%s written to %s\n", sys.name.c_str(), out_path.c_str());
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}

int main(int argc, char** argv) { return cli_main(argc, argv); }
