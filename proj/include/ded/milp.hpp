#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ded/model.hpp"
#include "ded/piecewise.hpp"

namespace ded {

enum class RowSense { LE, EQ, GE };

// One sparse row: sum_k coefs[k] * x[cols[k]]  (sense)  rhs.
struct MilpRow {
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
  std::vector<std::int32_t> cols;
  std::vector<double> coefs;
};

// Per-(unit, period) block of the dispatch model.  Column layout within a
// block is contiguous: P, then P_l for l = 0..L-1, then U_l for l = 0..L-1.
struct SegmentGroup {
  int unit = 0;
  int period = 0;
  int p_col = 0;
  int num_segments = 0;
  std::vector<double> breakpoints;  // a_0..a_L, copied from the PiecewiseCost
  int pl_col(int l) const { return p_col + 1 + l; }
  int u_col(int l) const { return p_col + 1 + num_segments + l; }
};

struct MilpInstance {
  std::string name;
  int num_cols = 0;
  std::vector<double> objective;
  std::vector<double> lower;  // -inf allowed
  std::vector<double> upper;  // +inf allowed
  std::vector<std::uint8_t> is_binary;
  std::vector<MilpRow> rows;
  std::vector<std::string> col_names;
  std::unordered_map<std::string, int> column_map;

  // Dispatch structure (empty for hand-built generic models).
  std::vector<SegmentGroup> groups;      // ordered unit-major, period-minor
  std::vector<int> sr_start;             // per reserve product, base column
  int sr_units = 0, sr_periods = 0;      // SR block shape

  bool statically_infeasible = false;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int sr_col(int product, int unit, int period) const {
    return sr_start[product] + unit * sr_periods + period;
  }
  // Throws std::logic_error naming the first violated invariant.
  void check() const;
};

// Assembles the piecewise-linear dispatch MILP.  pwcs must carry one entry
// per unit, in unit order, built from the same unit data.
MilpInstance build_milp(const SystemInstance& sys,
                        const std::vector<PiecewiseCost>& pwcs);

// Reads P and SR columns of x back into a Schedule; segment and binary
// columns are ignored.
Schedule extract_solution(const MilpInstance& milp, std::span<const double> x,
                          const SystemInstance& sys);

// Plain-text interchange dump (documented in the README) for cross-checking
// with external solvers.  Deterministic: equal instances serialize equally.
void write_milp(const MilpInstance& milp, std::ostream& out);
std::string to_interchange_text(const MilpInstance& milp);

}  // namespace ded
