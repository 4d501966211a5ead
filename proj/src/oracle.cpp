#include "ded/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "ded/simplex.hpp"

namespace ded {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// mt19937_64 output is standardized; map to [0,1) manually so the stream is
// identical across platforms (library distributions are not portable)
double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// residual of one row at x, positive when violated
double row_violation(const MilpRow& row, const std::vector<double>& x) {
  double act = 0.0;
  for (size_t k = 0; k < row.cols.size(); ++k)
    act += row.coefs[k] * x[row.cols[k]];
  switch (row.sense) {
    case RowSense::LE: return act - row.rhs;
    case RowSense::GE: return row.rhs - act;
    case RowSense::EQ: return std::fabs(act - row.rhs);
  }
  return 0.0;
}

void verify_candidate(const MilpInstance& milp, const LpSolution& lp) {
  for (size_t r = 0; r < milp.rows.size(); ++r) {
    const double viol = row_violation(milp.rows[r], lp.x);
    if (viol > 1e-6 * (1.0 + std::fabs(milp.rows[r].rhs)))
      throw std::logic_error("oracle candidate violates row " +
                             std::to_string(r) + " by " +
                             std::to_string(viol));
  }
  for (int j = 0; j < milp.num_cols; ++j)
    if (lp.x[j] < milp.lower[j] - 1e-6 || lp.x[j] > milp.upper[j] + 1e-6)
      throw std::logic_error("oracle candidate violates bounds of column " +
                             milp.col_names[j]);
}

// For single-unit models the balance row pins P to the demand, so the chosen
// assignment prices in closed form; cross-check the LP objective against it.
void verify_single_unit(const MilpInstance& milp, const std::vector<int>& pick,
                        double lp_objective) {
  double expected = 0.0;
  for (size_t g = 0; g < milp.groups.size(); ++g) {
    const SegmentGroup& grp = milp.groups[g];
    if (grp.unit != 0) return;  // not a single-unit model
    double demand = kInf;
    for (const MilpRow& row : milp.rows)
      if (row.sense == RowSense::EQ && row.cols.size() == 1 &&
          row.cols[0] == grp.p_col && row.coefs[0] == 1.0) {
        demand = row.rhs;
        break;
      }
    if (demand == kInf) return;  // no plain balance row to read
    const int l = pick[g];
    if (demand < grp.breakpoints[l] - 1e-7 ||
        demand > grp.breakpoints[l + 1] + 1e-7)
      throw std::logic_error(
          "oracle picked a segment that cannot carry the demand");
    expected += milp.objective[grp.pl_col(l)] * demand +
                milp.objective[grp.u_col(l)];
  }
  if (std::fabs(expected - lp_objective) > 1e-6 * std::max(1.0, std::fabs(expected)))
    throw std::logic_error("oracle closed-form cost " +
                           std::to_string(expected) +
                           " disagrees with LP objective " +
                           std::to_string(lp_objective));
}
}  // namespace

BnbResult enumerate_solve(const MilpInstance& milp, const TinyLimits& limits) {
  const auto t0 = std::chrono::steady_clock::now();
  milp.check();

  std::vector<std::uint8_t> in_group(milp.num_cols, 0);
  for (const SegmentGroup& g : milp.groups)
    for (int l = 0; l < g.num_segments; ++l) in_group[g.u_col(l)] = 1;
  std::vector<int> loose;
  for (int j = 0; j < milp.num_cols; ++j)
    if (milp.is_binary[j] && !in_group[j]) loose.push_back(j);

  double space = 1.0;
  std::string product;
  for (const SegmentGroup& g : milp.groups) {
    space *= g.num_segments;
    product += (product.empty() ? "" : "*") + std::to_string(g.num_segments);
  }
  if (!loose.empty()) {
    space *= std::pow(2.0, static_cast<double>(loose.size()));
    product += (product.empty() ? "2^" : "*2^") + std::to_string(loose.size());
  }
  if (product.empty()) product = "1";
  if (space > static_cast<double>(limits.max_assignments))
    throw std::invalid_argument(
        "enumeration needs " + product + " = " +
        std::to_string(static_cast<long long>(space)) +
        " assignments, above the cap of " +
        std::to_string(limits.max_assignments));

  BoundedSimplex sx(milp);
  const BoundedSimplex::Basis cold = sx.basis();
  const size_t ngroups = milp.groups.size();
  std::vector<int> pick(ngroups, 0);
  std::vector<int> bits(loose.size(), 0);

  BnbResult res;
  long visited = 0;
  std::vector<int> best_pick;

  while (true) {
    sx.reset_bounds();
    for (size_t g = 0; g < ngroups; ++g) {
      const SegmentGroup& grp = milp.groups[g];
      const int l = pick[g];
      for (int k = 0; k < grp.num_segments; ++k) {
        const double v = k == l ? 1.0 : 0.0;
        sx.set_bound(grp.u_col(k), v, v);
        if (k != l) sx.set_bound(grp.pl_col(k), 0.0, 0.0);
      }
      sx.set_bound(grp.pl_col(l), grp.breakpoints[l], grp.breakpoints[l + 1]);
      sx.set_bound(grp.p_col, grp.breakpoints[l], grp.breakpoints[l + 1]);
    }
    for (size_t k = 0; k < loose.size(); ++k)
      sx.set_bound(loose[k], bits[k], bits[k]);

    sx.set_basis(cold);
    const LpSolution lp = sx.solve();
    ++visited;
    if (lp.status == LpStatus::Optimal && lp.objective < res.incumbent_obj) {
      verify_candidate(milp, lp);
      res.incumbent = lp.x;
      res.incumbent_obj = lp.objective;
      best_pick = pick;
    }

    // odometer: later digits are least significant, so the visit order is
    // lexicographic in (pick, bits)
    bool advanced = false;
    size_t d = ngroups + loose.size();
    while (d > 0) {
      --d;
      if (d >= ngroups) {
        if (++bits[d - ngroups] < 2) {
          advanced = true;
          break;
        }
        bits[d - ngroups] = 0;
      } else {
        if (++pick[d] < milp.groups[d].num_segments) {
          advanced = true;
          break;
        }
        pick[d] = 0;
      }
    }
    if (!advanced) break;
  }

  res.nodes_processed = visited;
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (res.incumbent) {
    res.status = MilpStatus::Optimal;
    res.best_bound = res.incumbent_obj;
    res.achieved_rgap = 0.0;
    if (!best_pick.empty() && loose.empty())
      verify_single_unit(milp, best_pick, res.incumbent_obj);
  } else {
    res.status = MilpStatus::Infeasible;
    res.best_bound = kInf;
  }
  return res;
}

SystemInstance random_instance(std::uint64_t seed, int n_units,
                               int n_periods) {
  if (n_units < 1 || n_periods < 1)
    throw std::invalid_argument("generator needs at least one unit and period");
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  SystemInstance sys;
  sys.name = "rand" + std::to_string(seed) + "-" + std::to_string(n_units) +
             "x" + std::to_string(n_periods);
  sys.source = "synthetic test generator";

  double sum_min = 0, sum_max = 0, sum_ru = 0, sum_rd = 0;
  double init_lo = 0, init_hi = 0;
  for (int i = 0; i < n_units; ++i) {
    GeneratorUnit u;
    u.id = i + 1;
    u.p_min = 10.0 + 50.0 * u01(rng);
    const double range = 30.0 + 90.0 * u01(rng);
    u.p_max = u.p_min + range;
    u.alpha = 100.0 + 900.0 * u01(rng);
    u.beta = 10.0 + 15.0 * u01(rng);
    u.gamma = 0.001 + 0.099 * u01(rng);
    const double flat = u01(rng);
    const double amp = 5.0 + 55.0 * u01(rng);
    const int l_target = 1 + static_cast<int>(u01(rng) * 4.0);
    const double inside = l_target - 0.999 * u01(rng);
    if (flat < 0.15) {
      u.e = 0.0;
      u.f = 0.0;
    } else {
      u.e = amp;
      u.f = std::numbers::pi * inside / (2.0 * range);
    }
    u.ramp_up = range * (0.3 + 0.5 * u01(rng));
    u.ramp_down = range * (0.3 + 0.5 * u01(rng));
    const double has_init = u01(rng);
    const double init_frac = u01(rng);
    if (has_init < 0.5)
      u.initial_power = u.p_min + init_frac * range;
    sum_min += u.p_min;
    sum_max += u.p_max;
    sum_ru += u.ramp_up;
    sum_rd += u.ramp_down;
    init_lo += u.initial_power
                   ? std::max(u.p_min, *u.initial_power - u.ramp_down)
                   : u.p_min;
    init_hi += u.initial_power
                   ? std::min(u.p_max, *u.initial_power + u.ramp_up)
                   : u.p_max;
    sys.units.push_back(u);
  }

  const bool with_reserve = u01(rng) < 0.3;
  const double tau = u01(rng) < 0.5 ? 1.0 : 1.0 / 6.0;
  const double rho = 0.02 + 0.03 * u01(rng);
  const double span = sum_max - sum_min;
  double ceiling = sum_max - 0.02 * span;
  if (with_reserve)
    ceiling = std::min(ceiling, (sum_max - 0.02 * span) / (1.0 + rho));
  const double floor_d = sum_min + 0.02 * span;

  double prev = 0.0;
  for (int t = 0; t < n_periods; ++t) {
    double lo = floor_d, hi = ceiling;
    if (t == 0) {
      lo = std::max(lo, init_lo + 0.05 * (init_hi - init_lo));
      hi = std::min(hi, init_hi - 0.05 * (init_hi - init_lo));
    } else {
      lo = std::max(lo, prev - 0.8 * sum_rd);
      hi = std::min(hi, prev + 0.8 * sum_ru);
    }
    if (hi < lo) {  // over-constrained corner: settle mid-window
      const double mid = std::clamp(0.5 * (lo + hi), floor_d, ceiling);
      lo = hi = mid;
    }
    prev = lo + (hi - lo) * u01(rng);
    sys.demand.push_back(prev);
  }

  if (with_reserve) {
    ReserveProduct rp;
    rp.tau_hours = tau;
    for (double d : sys.demand) {
      double r = rho * d;
      r = std::min(r, 0.7 * tau * sum_ru);
      r = std::min(r, sum_max - d - 0.01 * span);
      rp.requirement.push_back(std::max(r, 0.0));
    }
    sys.reserves.push_back(std::move(rp));
  }

  sys.check();
  return sys;
}

}  // namespace ded
