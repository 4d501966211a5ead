#include "ded/milp.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ded {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

const char* sense_text(RowSense s) {
  switch (s) {
    case RowSense::LE: return "<=";
    case RowSense::EQ: return "=";
    case RowSense::GE: return ">=";
  }
  return "?";
}

std::string fmt_bound(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void MilpInstance::check() const {
  if (static_cast<int>(objective.size()) != num_cols ||
      static_cast<int>(lower.size()) != num_cols ||
      static_cast<int>(upper.size()) != num_cols ||
      static_cast<int>(is_binary.size()) != num_cols ||
      static_cast<int>(col_names.size()) != num_cols)
    throw std::logic_error("column arrays disagree on num_cols");
  for (int j = 0; j < num_cols; ++j) {
    if (lower[j] > upper[j])
      throw std::logic_error("column " + col_names[j] + " has crossed bounds");
    if (is_binary[j] && (lower[j] < 0.0 || upper[j] > 1.0))
      throw std::logic_error("binary column " + col_names[j] +
                             " has bounds outside [0, 1]");
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    const MilpRow& row = rows[r];
    if (row.cols.size() != row.coefs.size())
      throw std::logic_error("row " + std::to_string(r) +
                             " has mismatched term arrays");
    std::unordered_set<int> seen;
    for (std::int32_t j : row.cols) {
      if (j < 0 || j >= num_cols)
        throw std::logic_error("row " + std::to_string(r) +
                               " references column " + std::to_string(j));
      if (!seen.insert(j).second)
        throw std::logic_error("row " + std::to_string(r) +
                               " repeats column " + col_names[j]);
    }
  }
  if (static_cast<int>(column_map.size()) != num_cols)
    throw std::logic_error("column_map is not a bijection");
  for (const auto& [name, j] : column_map)
    if (j < 0 || j >= num_cols || col_names[j] != name)
      throw std::logic_error("column_map entry " + name + " is inconsistent");
}

MilpInstance build_milp(const SystemInstance& sys,
                        const std::vector<PiecewiseCost>& pwcs) {
  sys.check();
  const int n = sys.num_units();
  const int horizon = sys.num_periods();
  if (static_cast<int>(pwcs.size()) != n)
    throw std::invalid_argument(
        "expected one piecewise cost per unit, got " +
        std::to_string(pwcs.size()) + " for " + std::to_string(n) + " units");
  for (int i = 0; i < n; ++i)
    if (pwcs[i].unit_id != sys.units[i].id)
      throw std::invalid_argument("piecewise cost " + std::to_string(i) +
                                  " built for unit " +
                                  std::to_string(pwcs[i].unit_id) +
                                  " but position holds unit " +
                                  std::to_string(sys.units[i].id));

  MilpInstance milp;
  milp.name = sys.name.empty() ? "dispatch" : sys.name;
  if (!pwcs.empty()) milp.name += "-m" + std::to_string(pwcs[0].m_param);
  milp.statically_infeasible = !sys.statically_feasible();

  auto add_col = [&milp](std::string name, double lo, double hi, bool binary,
                         double obj) {
    const int j = milp.num_cols++;
    milp.column_map.emplace(name, j);
    milp.col_names.push_back(std::move(name));
    milp.lower.push_back(lo);
    milp.upper.push_back(hi);
    milp.is_binary.push_back(binary ? 1 : 0);
    milp.objective.push_back(obj);
    return j;
  };
  auto tag = [](const char* base, std::initializer_list<int> idx) {
    std::string s = base;
    for (int v : idx) s += "[" + std::to_string(v + 1) + "]";
    return s;
  };

  // columns: per (i,t) one P, L segment parts, L segment binaries ...
  milp.groups.reserve(static_cast<size_t>(n) * horizon);
  for (int i = 0; i < n; ++i) {
    const GeneratorUnit& u = sys.units[i];
    const PiecewiseCost& pwc = pwcs[i];
    const int segs = pwc.num_segments();
    for (int t = 0; t < horizon; ++t) {
      SegmentGroup g;
      g.unit = i;
      g.period = t;
      g.num_segments = segs;
      g.breakpoints = pwc.breakpoints;
      g.p_col = add_col(tag("P", {i, t}), u.p_min, u.p_max, false, 0.0);
      for (int l = 0; l < segs; ++l)
        add_col(tag("Pl", {i, t, l}), 0.0, pwc.breakpoints[l + 1], false,
                pwc.slopes[l]);
      for (int l = 0; l < segs; ++l)
        add_col(tag("U", {i, t, l}), 0.0, 1.0, true, pwc.intercepts[l]);
      milp.groups.push_back(std::move(g));
    }
  }
  // ... then one SR column per (product, unit, period).
  milp.sr_units = n;
  milp.sr_periods = horizon;
  for (size_t r = 0; r < sys.reserves.size(); ++r) {
    milp.sr_start.push_back(milp.num_cols);
    const double tau = sys.reserves[r].tau_hours;
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < horizon; ++t)
        add_col(tag("SR", {static_cast<int>(r), i, t}), 0.0,
                tau * sys.units[i].ramp_up, false, 0.0);
  }

  auto add_row = [&milp](RowSense sense, double rhs) -> MilpRow& {
    milp.rows.push_back({sense, rhs, {}, {}});
    return milp.rows.back();
  };
  auto term = [](MilpRow& row, int col, double coef) {
    row.cols.push_back(col);
    row.coefs.push_back(coef);
  };

  // segment structure per (i,t): coupling, segment bounds, one-hot choice
  for (const SegmentGroup& g : milp.groups) {
    MilpRow& couple = add_row(RowSense::EQ, 0.0);
    term(couple, g.p_col, 1.0);
    for (int l = 0; l < g.num_segments; ++l) term(couple, g.pl_col(l), -1.0);
    for (int l = 0; l < g.num_segments; ++l) {
      MilpRow& hi = add_row(RowSense::LE, 0.0);
      term(hi, g.pl_col(l), 1.0);
      term(hi, g.u_col(l), -g.breakpoints[l + 1]);
      MilpRow& lo = add_row(RowSense::GE, 0.0);
      term(lo, g.pl_col(l), 1.0);
      term(lo, g.u_col(l), -g.breakpoints[l]);
    }
    MilpRow& one = add_row(RowSense::EQ, 1.0);
    for (int l = 0; l < g.num_segments; ++l) term(one, g.u_col(l), 1.0);
  }

  // power balance per period
  for (int t = 0; t < horizon; ++t) {
    MilpRow& bal = add_row(RowSense::EQ, sys.demand[t]);
    for (int i = 0; i < n; ++i)
      term(bal, milp.groups[static_cast<size_t>(i) * horizon + t].p_col, 1.0);
  }

  // ramp limits between consecutive periods (and against initial_power)
  for (int i = 0; i < n; ++i) {
    const GeneratorUnit& u = sys.units[i];
    for (int t = 0; t < horizon; ++t) {
      const int p_now = milp.groups[static_cast<size_t>(i) * horizon + t].p_col;
      if (t == 0) {
        if (!u.initial_power) continue;
        MilpRow& up = add_row(RowSense::LE, *u.initial_power + u.ramp_up);
        term(up, p_now, 1.0);
        MilpRow& down = add_row(RowSense::GE, *u.initial_power - u.ramp_down);
        term(down, p_now, 1.0);
        continue;
      }
      const int p_prev =
          milp.groups[static_cast<size_t>(i) * horizon + t - 1].p_col;
      MilpRow& up = add_row(RowSense::LE, u.ramp_up);
      term(up, p_now, 1.0);
      term(up, p_prev, -1.0);
      MilpRow& down = add_row(RowSense::GE, -u.ramp_down);
      term(down, p_now, 1.0);
      term(down, p_prev, -1.0);
    }
  }

  // reserve headroom per (r,i,t) and aggregate requirement per (r,t)
  for (size_t r = 0; r < sys.reserves.size(); ++r) {
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < horizon; ++t) {
        MilpRow& cap = add_row(RowSense::LE, sys.units[i].p_max);
        term(cap, milp.sr_col(static_cast<int>(r), i, t), 1.0);
        term(cap, milp.groups[static_cast<size_t>(i) * horizon + t].p_col, 1.0);
      }
    for (int t = 0; t < horizon; ++t) {
      MilpRow& req = add_row(RowSense::GE, sys.reserves[r].requirement[t]);
      for (int i = 0; i < n; ++i)
        term(req, milp.sr_col(static_cast<int>(r), i, t), 1.0);
    }
  }

  milp.check();
  return milp;
}

Schedule extract_solution(const MilpInstance& milp, std::span<const double> x,
                          const SystemInstance& sys) {
  if (static_cast<int>(x.size()) != milp.num_cols)
    throw std::invalid_argument("solution vector has " +
                                std::to_string(x.size()) + " entries for " +
                                std::to_string(milp.num_cols) + " columns");
  const int n = sys.num_units();
  const int horizon = sys.num_periods();
  auto col = [&milp](const std::string& name) {
    auto it = milp.column_map.find(name);
    if (it == milp.column_map.end())
      throw std::invalid_argument("model has no column " + name);
    return it->second;
  };

  Schedule schedule;
  schedule.power = Matrix(n, horizon);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < horizon; ++t)
      schedule.power.at(i, t) =
          x[col("P[" + std::to_string(i + 1) + "][" + std::to_string(t + 1) +
                "]")];
  for (size_t r = 0; r < sys.reserves.size(); ++r) {
    Matrix sr(n, horizon);
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < horizon; ++t)
        sr.at(i, t) = x[col("SR[" + std::to_string(r + 1) + "][" +
                            std::to_string(i + 1) + "][" +
                            std::to_string(t + 1) + "]")];
    schedule.reserve.push_back(std::move(sr));
  }
  return schedule;
}

void write_milp(const MilpInstance& milp, std::ostream& out) {
  char buf[64];
  out << "# milp interchange v1\n";
  out << "problem " << milp.name << "\n";
  out << "objective minimize\n";
  out << "columns " << milp.num_cols << "\n";
  for (int j = 0; j < milp.num_cols; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", milp.objective[j]);
    out << "col " << j << " " << milp.col_names[j] << " "
        << fmt_bound(milp.lower[j]) << " " << fmt_bound(milp.upper[j]) << " "
        << (milp.is_binary[j] ? "binary" : "continuous") << " " << buf << "\n";
  }
  out << "rows " << milp.rows.size() << "\n";
  for (size_t r = 0; r < milp.rows.size(); ++r) {
    const MilpRow& row = milp.rows[r];
    std::snprintf(buf, sizeof buf, "%.17g", row.rhs);
    out << "row " << r << " " << sense_text(row.sense) << " " << buf << " "
        << row.cols.size();
    for (size_t k = 0; k < row.cols.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", row.coefs[k]);
      out << " " << row.cols[k] << " " << buf;
    }
    out << "\n";
  }
  out << "end\n";
}

std::string to_interchange_text(const MilpInstance& milp) {
  std::ostringstream oss;
  write_milp(milp, oss);
  return oss.str();
}

}  // namespace ded
