#pragma once

// Seeded generator of small generic LPs (no binaries, no dispatch structure)
// with small-integer data, so every coefficient converts to an exact
// rational.  The mix intentionally produces optimal, infeasible, and
// unbounded problems.

#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "ded/milp.hpp"

namespace testsupport {

inline ded::MilpInstance random_lp(std::uint64_t seed) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0xda3e39cb94b95bdbull);
  auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto pick_int = [&](int lo, int hi) {
    return lo + static_cast<int>(u01() * (hi - lo + 1));
  };

  ded::MilpInstance lp;
  lp.name = "rlp-" + std::to_string(seed);
  const int n = pick_int(2, 8);
  const int m = pick_int(1, 6);
  for (int j = 0; j < n; ++j) {
    const std::string name = "x" + std::to_string(j);
    lp.column_map.emplace(name, j);
    lp.col_names.push_back(name);
    lp.objective.push_back(pick_int(-5, 5));
    lp.is_binary.push_back(0);
    const double q = u01();
    if (q < 0.60) {
      lp.lower.push_back(0.0);
      lp.upper.push_back(pick_int(1, 10));
    } else if (q < 0.75) {
      lp.lower.push_back(-5.0);
      lp.upper.push_back(5.0);
    } else if (q < 0.85) {
      lp.lower.push_back(0.0);
      lp.upper.push_back(kInf);
    } else if (q < 0.93) {
      lp.lower.push_back(-kInf);
      lp.upper.push_back(5.0);
    } else {
      lp.lower.push_back(-kInf);
      lp.upper.push_back(kInf);
    }
  }
  lp.num_cols = n;

  for (int r = 0; r < m; ++r) {
    ded::MilpRow row;
    for (int j = 0; j < n; ++j)
      if (u01() < 0.6) {
        int coef = pick_int(-3, 3);
        if (coef == 0) coef = 1;
        row.cols.push_back(j);
        row.coefs.push_back(coef);
      }
    if (row.cols.empty()) {
      row.cols.push_back(pick_int(0, n - 1));
      row.coefs.push_back(1.0);
    }
    const double q = u01();
    row.sense = q < 0.4   ? ded::RowSense::LE
                : q < 0.7 ? ded::RowSense::GE
                          : ded::RowSense::EQ;
    row.rhs = pick_int(-8, 8);
    lp.rows.push_back(std::move(row));
  }
  lp.check();
  return lp;
}

}  // namespace testsupport
