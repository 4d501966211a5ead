#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "ded/milp.hpp"
#include "ded/simplex.hpp"

namespace ded {

enum class BranchRule { MostFractional, PseudoCost };
enum class NodeSelection { BestBound, DepthFirstPlunge };
enum class MilpStatus { GapReached, Optimal, TimeLimit, NodeLimit, Infeasible };
const char* to_string(MilpStatus status);

struct SolverConfig {
  double rgap_target = 0.0025;
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  long node_limit = std::numeric_limits<long>::max();
  double feasibility_tol = 1e-6;
  double integrality_tol = 1e-6;
  BranchRule branching_rule = BranchRule::MostFractional;
  NodeSelection node_selection = NodeSelection::BestBound;
  std::uint64_t seed = 0;  // reserved for stochastic tie-breaking rules
  int threads = 1;         // >1 shares the node pool across workers
  std::ostream* trace = nullptr;  // per-node event log when set
  SimplexOptions lp;
};

struct BnbResult {
  MilpStatus status = MilpStatus::Infeasible;
  std::optional<std::vector<double>> incumbent;
  double incumbent_obj = std::numeric_limits<double>::infinity();
  double best_bound = -std::numeric_limits<double>::infinity();
  double achieved_rgap = std::numeric_limits<double>::infinity();
  long nodes_processed = 0;  // nodes beyond the root
  double wall_time = 0.0;
};

// Branch-and-bound over the binary columns.  Branching a segment binary
// propagates the one-hot group structure: fixing U=1 pins the generator into
// that segment's power range, fixing U=0 zeroes the matching segment part and
// cascades when a single candidate segment remains.
BnbResult solve_milp(const MilpInstance& milp, const SolverConfig& config = {});

}  // namespace ded
