#pragma once

// Text formats for system instances and dispatch solutions, plus the system
// duplication used to grow benchmark instances.
//
// Instance files are line oriented.  '#' starts a comment, blank lines are
// skipped, and each remaining line begins with a directive:
//
//   name <word>
//   source <free text until end of line>
//   periods <T>
//   unit id=<n> alpha=<v> beta=<v> gamma=<v> e=<v> f=<v> pmin=<v> pmax=<v>
//        ramp_up=<v> ramp_down=<v> [initial=<v>]
//   demand <v> <v> ...          (may repeat; values accumulate to length T)
//   reserve tau=<hours> fraction=<x>
//   reserve tau=<hours> requirement=<v> <v> ...   (length T)
//
// Unknown directives and unknown unit/reserve keys are rejected with the
// offending token and line number.  A `fraction` reserve expands to
// requirement[t] = fraction * demand[t] once the demand block is complete.
//
// Solution files carry a solved (or externally published) schedule:
//
//   solution <instance name>
//   status <word>
//   units <N>
//   periods <T>
//   objective <v>          } metadata lines, each optional; `objective` and
//   milp_objective <v>     } `ogap` are recomputed from the rounded schedule
//   best_bound <v>         } on every write so the file is self-consistent
//   rgap <v>
//   ogap <v>
//   nodes <n>
//   wall_time <v>
//   config <free text>
//   period <t> <MW> ... <MW>      (N values, 2-decimal fixed point)
//   reserve <r>                   (then T more `period` rows of MW)
//   note <free text>              (generated; ignored on parse)
//
// Power values are written with two decimals, so a parsed schedule is the
// written one rounded to 0.01 MW; writing it again reproduces the same bytes.

#include <limits>
#include <optional>
#include <string>

#include "ded/model.hpp"

namespace ded {

// solver-side facts echoed into a solution file
struct SolveMeta {
  std::string status;  // e.g. "gap-reached", "optimal", "infeasible"
  double objective = std::numeric_limits<double>::quiet_NaN();
  double milp_objective = std::numeric_limits<double>::quiet_NaN();
  double best_bound = std::numeric_limits<double>::quiet_NaN();
  double rgap = std::numeric_limits<double>::quiet_NaN();
  double ogap = std::numeric_limits<double>::quiet_NaN();
  long nodes = -1;
  double wall_time = std::numeric_limits<double>::quiet_NaN();
  std::string config;
};

struct SolutionFile {
  std::string instance;
  SolveMeta meta;
  std::optional<Schedule> schedule;  // absent for metadata-only files
};

SystemInstance parse_instance_text(const std::string& text,
                                   const std::string& origin = "<string>");
SystemInstance parse_instance(const std::string& path);
std::string instance_to_text(const SystemInstance& sys);
void write_instance(const SystemInstance& sys, const std::string& path);

// Replicates every unit k times with fresh ids 1..k*N and scales the demand
// profile and all reserve requirements by k.
SystemInstance duplicate_system(const SystemInstance& sys, int k);

// Renders a solution file.  The schedule is rounded to 0.01 MW first;
// `objective` is the true cost of the rounded schedule and `ogap` is its
// optimality gap against meta.best_bound (when that is finite and positive).
// Constant-output units get a trailing `note` line.
std::string solution_to_text(const SystemInstance& sys,
                             const std::optional<Schedule>& schedule,
                             const SolveMeta& meta);
void write_solution(const SystemInstance& sys,
                    const std::optional<Schedule>& schedule,
                    const SolveMeta& meta, const std::string& path);

SolutionFile parse_solution_text(const std::string& text,
                                 const std::string& origin = "<string>");
SolutionFile parse_solution(const std::string& path);

}  // namespace ded
