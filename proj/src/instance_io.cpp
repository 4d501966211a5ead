#include "ded/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ded/cost.hpp"

namespace ded {

namespace {

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_num(const std::string& tok, const std::string& origin, int line) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + tok + "'");
  }
}

// shortest representation that parses back to the same double
std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::string fmt_fixed(double v, int decimals) {
  char buf[48];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  (void)ec;
  return std::string(buf, end);
}

double round_mw(double v) {
  const double r = std::round(v * 100.0) / 100.0;
  return r == 0.0 ? 0.0 : r;  // normalize -0.0 so it prints as 0.00
}

// text after the directive word, leading blanks stripped
std::string rest_of(const std::string& line, const std::string& head) {
  size_t pos = line.find(head) + head.size();
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  std::string out = line.substr(pos);
  while (!out.empty() && (out.back() == ' ' || out.back() == '\t' ||
                          out.back() == '\r'))
    out.pop_back();
  return out;
}

}  // namespace

SystemInstance parse_instance_text(const std::string& text,
                                   const std::string& origin) {
  SystemInstance sys;
  int declared_periods = -1;
  struct PendingReserve {
    double tau = 0.0;
    double fraction = -1.0;  // < 0 when an explicit requirement list is given
    std::vector<double> requirement;
    int line = 0;
  };
  std::vector<PendingReserve> pending;

  std::istringstream stream(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(stream, raw)) {
    ++lineno;
    if (const size_t hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::vector<std::string> toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0];

    if (head == "name") {
      if (toks.size() != 2) fail(origin, lineno, "name takes a single word");
      sys.name = toks[1];
    } else if (head == "source") {
      sys.source = rest_of(raw, "source");
    } else if (head == "periods") {
      if (toks.size() != 2) fail(origin, lineno, "periods takes one integer");
      declared_periods = static_cast<int>(parse_num(toks[1], origin, lineno));
      if (declared_periods < 1) fail(origin, lineno, "periods must be >= 1");
    } else if (head == "unit") {
      GeneratorUnit u;
      bool has[11] = {};
      static const char* keys[11] = {"id",      "alpha",     "beta",
                                     "gamma",   "e",         "f",
                                     "pmin",    "pmax",      "ramp_up",
                                     "ramp_down", "initial"};
      for (size_t k = 1; k < toks.size(); ++k) {
        const size_t eq = toks[k].find('=');
        if (eq == std::string::npos)
          fail(origin, lineno, "unit fields are key=value, got '" + toks[k] + "'");
        const std::string key = toks[k].substr(0, eq);
        const double val = parse_num(toks[k].substr(eq + 1), origin, lineno);
        int ki = -1;
        for (int j = 0; j < 11; ++j)
          if (key == keys[j]) ki = j;
        if (ki < 0) fail(origin, lineno, "unknown unit key '" + key + "'");
        if (has[ki]) fail(origin, lineno, "duplicate unit key '" + key + "'");
        has[ki] = true;
        switch (ki) {
          case 0: u.id = static_cast<int>(val); break;
          case 1: u.alpha = val; break;
          case 2: u.beta = val; break;
          case 3: u.gamma = val; break;
          case 4: u.e = val; break;
          case 5: u.f = val; break;
          case 6: u.p_min = val; break;
          case 7: u.p_max = val; break;
          case 8: u.ramp_up = val; break;
          case 9: u.ramp_down = val; break;
          case 10: u.initial_power = val; break;
        }
      }
      for (int j = 0; j < 10; ++j)  // everything but `initial` is required
        if (!has[j])
          fail(origin, lineno,
               std::string("unit is missing required key '") + keys[j] + "'");
      sys.units.push_back(u);
    } else if (head == "demand") {
      for (size_t k = 1; k < toks.size(); ++k)
        sys.demand.push_back(parse_num(toks[k], origin, lineno));
    } else if (head == "reserve") {
      PendingReserve r;
      r.line = lineno;
      bool has_tau = false, has_req = false;
      for (size_t k = 1; k < toks.size(); ++k) {
        const size_t eq = toks[k].find('=');
        const std::string key =
            eq == std::string::npos ? toks[k] : toks[k].substr(0, eq);
        if (has_req) {  // bare numbers continue the requirement list
          r.requirement.push_back(parse_num(toks[k], origin, lineno));
          continue;
        }
        if (eq == std::string::npos)
          fail(origin, lineno,
               "reserve fields are key=value, got '" + toks[k] + "'");
        const std::string val = toks[k].substr(eq + 1);
        if (key == "tau") {
          r.tau = parse_num(val, origin, lineno);
          has_tau = true;
        } else if (key == "fraction") {
          r.fraction = parse_num(val, origin, lineno);
        } else if (key == "requirement") {
          has_req = true;
          if (!val.empty())
            r.requirement.push_back(parse_num(val, origin, lineno));
        } else {
          fail(origin, lineno, "unknown reserve key '" + key + "'");
        }
      }
      if (!has_tau) fail(origin, lineno, "reserve is missing tau=");
      if (has_req == (r.fraction >= 0.0))
        fail(origin, lineno,
             "reserve needs exactly one of fraction= or requirement=");
      pending.push_back(std::move(r));
    } else {
      fail(origin, lineno, "unknown directive '" + head + "'");
    }
  }

  if (sys.name.empty()) fail(origin, lineno, "missing name directive");
  if (declared_periods < 0) fail(origin, lineno, "missing periods directive");
  if (static_cast<int>(sys.demand.size()) != declared_periods)
    fail(origin, lineno,
         "demand has " + std::to_string(sys.demand.size()) +
             " values but periods declares " + std::to_string(declared_periods));

  for (PendingReserve& r : pending) {
    ReserveProduct rp;
    rp.tau_hours = r.tau;
    if (r.fraction >= 0.0) {
      for (double d : sys.demand) rp.requirement.push_back(r.fraction * d);
    } else {
      if (static_cast<int>(r.requirement.size()) != declared_periods)
        fail(origin, r.line,
             "reserve requirement has " + std::to_string(r.requirement.size()) +
                 " values but periods declares " +
                 std::to_string(declared_periods));
      rp.requirement = std::move(r.requirement);
    }
    sys.reserves.push_back(std::move(rp));
  }

  try {
    sys.check();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return sys;
}

SystemInstance parse_instance(const std::string& path) {
  return parse_instance_text(read_file(path), path);
}

std::string instance_to_text(const SystemInstance& sys) {
  std::ostringstream out;
  out << "name " << sys.name << "\n";
  if (!sys.source.empty()) out << "source " << sys.source << "\n";
  out << "periods " << sys.num_periods() << "\n";
  for (const GeneratorUnit& u : sys.units) {
    out << "unit id=" << u.id << " alpha=" << fmt(u.alpha) << " beta="
        << fmt(u.beta) << " gamma=" << fmt(u.gamma) << " e=" << fmt(u.e)
        << " f=" << fmt(u.f) << " pmin=" << fmt(u.p_min) << " pmax="
        << fmt(u.p_max) << " ramp_up=" << fmt(u.ramp_up) << " ramp_down="
        << fmt(u.ramp_down);
    if (u.initial_power) out << " initial=" << fmt(*u.initial_power);
    out << "\n";
  }
  out << "demand";
  for (double d : sys.demand) out << " " << fmt(d);
  out << "\n";
  for (const ReserveProduct& r : sys.reserves) {
    out << "reserve tau=" << fmt(r.tau_hours) << " requirement=";
    for (size_t t = 0; t < r.requirement.size(); ++t)
      out << (t ? " " : "") << fmt(r.requirement[t]);
    out << "\n";
  }
  return out.str();
}

void write_instance(const SystemInstance& sys, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_text(sys);
  if (!out) throw std::runtime_error("write failed for " + path);
}

SystemInstance duplicate_system(const SystemInstance& sys, int k) {
  if (k < 1) throw std::invalid_argument("duplication factor must be >= 1");
  SystemInstance big;
  big.name = sys.name + "-x" + std::to_string(k);
  big.source = sys.source;
  big.units.reserve(sys.units.size() * static_cast<size_t>(k));
  int next_id = 1;
  for (int c = 0; c < k; ++c)
    for (const GeneratorUnit& u : sys.units) {
      GeneratorUnit copy = u;
      copy.id = next_id++;
      big.units.push_back(copy);
    }
  big.demand.reserve(sys.demand.size());
  for (double d : sys.demand) big.demand.push_back(d * k);
  for (const ReserveProduct& r : sys.reserves) {
    ReserveProduct rp;
    rp.tau_hours = r.tau_hours;
    for (double v : r.requirement) rp.requirement.push_back(v * k);
    big.reserves.push_back(std::move(rp));
  }
  big.check();
  return big;
}

std::string solution_to_text(const SystemInstance& sys,
                             const std::optional<Schedule>& schedule,
                             const SolveMeta& meta) {
  SolveMeta m = meta;
  std::optional<Schedule> rounded;
  if (schedule) {
    rounded = *schedule;
    for (double& v : rounded->power.data) v = round_mw(v);
    for (Matrix& r : rounded->reserve)
      for (double& v : r.data) v = round_mw(v);
    m.objective = schedule_cost(sys, *rounded);
    if (std::isfinite(m.best_bound) && m.best_bound > 0.0)
      m.ogap = optimality_gap(m.objective, m.best_bound);
  }

  std::ostringstream out;
  out << "solution " << sys.name << "\n";
  if (!m.status.empty()) out << "status " << m.status << "\n";
  out << "units " << sys.num_units() << "\n";
  out << "periods " << sys.num_periods() << "\n";
  auto put = [&out](const char* key, double v) {
    if (std::isfinite(v)) out << key << " " << fmt(v) << "\n";
  };
  put("objective", m.objective);
  put("milp_objective", m.milp_objective);
  put("best_bound", m.best_bound);
  put("rgap", m.rgap);
  put("ogap", m.ogap);
  if (m.nodes >= 0) out << "nodes " << m.nodes << "\n";
  put("wall_time", m.wall_time);
  if (!m.config.empty()) out << "config " << m.config << "\n";

  if (rounded) {
    const Matrix& p = rounded->power;
    for (int t = 0; t < p.cols; ++t) {
      out << "period " << t + 1;
      for (int i = 0; i < p.rows; ++i) out << " " << fmt_fixed(p.at(i, t), 2);
      out << "\n";
    }
    for (size_t r = 0; r < rounded->reserve.size(); ++r) {
      out << "reserve " << r + 1 << "\n";
      const Matrix& sr = rounded->reserve[r];
      for (int t = 0; t < sr.cols; ++t) {
        out << "period " << t + 1;
        for (int i = 0; i < sr.rows; ++i)
          out << " " << fmt_fixed(sr.at(i, t), 2);
        out << "\n";
      }
    }
    for (int i = 0; i < p.rows; ++i) {
      bool constant = true;
      for (int t = 1; t < p.cols && constant; ++t)
        constant = p.at(i, t) == p.at(i, 0);
      if (constant && p.cols > 1)
        out << "note unit " << sys.units[i].id << " constant at "
            << fmt_fixed(p.at(i, 0), 2) << " MW\n";
    }
  }
  return out.str();
}

void write_solution(const SystemInstance& sys,
                    const std::optional<Schedule>& schedule,
                    const SolveMeta& meta, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << solution_to_text(sys, schedule, meta);
  if (!out) throw std::runtime_error("write failed for " + path);
}

SolutionFile parse_solution_text(const std::string& text,
                                 const std::string& origin) {
  SolutionFile sol;
  int units = -1, periods = -1;
  // -1: power block; r >= 0: reserve block r
  int block = -1;
  std::vector<Matrix> tables;
  bool any_rows = false;

  std::istringstream stream(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(stream, raw)) {
    ++lineno;
    if (const size_t hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::vector<std::string> toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0];

    if (head == "solution") {
      if (toks.size() != 2) fail(origin, lineno, "solution takes one word");
      sol.instance = toks[1];
    } else if (head == "status") {
      if (toks.size() != 2) fail(origin, lineno, "status takes one word");
      sol.meta.status = toks[1];
    } else if (head == "units") {
      units = static_cast<int>(parse_num(toks.at(1), origin, lineno));
    } else if (head == "periods") {
      periods = static_cast<int>(parse_num(toks.at(1), origin, lineno));
    } else if (head == "objective") {
      sol.meta.objective = parse_num(toks.at(1), origin, lineno);
    } else if (head == "milp_objective") {
      sol.meta.milp_objective = parse_num(toks.at(1), origin, lineno);
    } else if (head == "best_bound") {
      sol.meta.best_bound = parse_num(toks.at(1), origin, lineno);
    } else if (head == "rgap") {
      sol.meta.rgap = parse_num(toks.at(1), origin, lineno);
    } else if (head == "ogap") {
      sol.meta.ogap = parse_num(toks.at(1), origin, lineno);
    } else if (head == "nodes") {
      sol.meta.nodes = static_cast<long>(parse_num(toks.at(1), origin, lineno));
    } else if (head == "wall_time") {
      sol.meta.wall_time = parse_num(toks.at(1), origin, lineno);
    } else if (head == "config") {
      sol.meta.config = rest_of(raw, "config");
    } else if (head == "note") {
      // generated commentary, carries no data
    } else if (head == "reserve") {
      const int r = static_cast<int>(parse_num(toks.at(1), origin, lineno));
      if (r != block + 2)
        fail(origin, lineno, "reserve blocks must appear in order");
      block = r - 1;
    } else if (head == "period") {
      if (units < 1 || periods < 1)
        fail(origin, lineno, "period rows before units/periods counts");
      const int t = static_cast<int>(parse_num(toks.at(1), origin, lineno));
      if (t < 1 || t > periods)
        fail(origin, lineno, "period index " + std::to_string(t) +
                                 " outside 1.." + std::to_string(periods));
      if (static_cast<int>(toks.size()) - 2 != units)
        fail(origin, lineno,
             "expected " + std::to_string(units) + " values, got " +
                 std::to_string(toks.size() - 2));
      while (static_cast<int>(tables.size()) <= block + 1)
        tables.emplace_back(units, periods);
      Matrix& tab = tables[block + 1];
      for (int i = 0; i < units; ++i)
        tab.at(i, t - 1) = parse_num(toks[2 + i], origin, lineno);
      any_rows = true;
    } else {
      fail(origin, lineno, "unknown directive '" + head + "'");
    }
  }

  if (sol.instance.empty()) fail(origin, lineno, "missing solution directive");
  if (units < 1 || periods < 1)
    fail(origin, lineno, "missing units/periods counts");
  if (any_rows) {
    Schedule sched;
    sched.power = std::move(tables[0]);
    for (size_t r = 1; r < tables.size(); ++r)
      sched.reserve.push_back(std::move(tables[r]));
    sol.schedule = std::move(sched);
  }
  return sol;
}

SolutionFile parse_solution(const std::string& path) {
  return parse_solution_text(read_file(path), path);
}

}  // namespace ded
