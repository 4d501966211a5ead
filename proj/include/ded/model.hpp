#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ded {

// One thermal generating unit.  Cost is the usual quadratic plus a rectified
// sine ripple from sequential steam admission valves:
//   c(p) = alpha + beta p + gamma p^2 + |e sin(f (p - p_min))|
struct GeneratorUnit {
  int id = 0;
  double alpha = 0.0;  // $/h
  double beta = 0.0;   // $/MWh
  double gamma = 0.0;  // $/MW^2 h
  double e = 0.0;      // ripple amplitude, $/h
  double f = 0.0;      // ripple frequency, rad/MW
  double p_min = 0.0;  // MW
  double p_max = 0.0;  // MW
  double ramp_down = 0.0;  // max decrease per period, MW
  double ramp_up = 0.0;    // max increase per period, MW
  // Output in the period before the horizon starts.  When absent, ramp
  // constraints are not enforced at t = 0.
  std::optional<double> initial_power;
};

// Spinning reserve product deliverable within tau_hours.  requirement[t] is
// the system-wide MW that must be available in period t.
struct ReserveProduct {
  double tau_hours = 0.0;
  std::vector<double> requirement;
};

struct SystemInstance {
  std::string name;
  std::string source;
  std::vector<GeneratorUnit> units;
  std::vector<double> demand;  // MW per period
  std::vector<ReserveProduct> reserves;

  int num_units() const { return static_cast<int>(units.size()); }
  int num_periods() const { return static_cast<int>(demand.size()); }

  // Throws std::invalid_argument naming the first violated invariant.
  void check() const;

  // sum p_min <= demand[t] <= sum p_max for all t.  A false result does not
  // make the instance invalid, only unservable as stated.
  bool statically_feasible() const;
};

// Dense row-major units x periods table.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}
  double& at(int i, int t) { return data[static_cast<size_t>(i) * cols + t]; }
  double at(int i, int t) const {
    return data[static_cast<size_t>(i) * cols + t];
  }
};

// Dispatch decision: power per (unit, period) and, optionally, one reserve
// table per reserve product of the owning instance.
struct Schedule {
  Matrix power;
  std::vector<Matrix> reserve;
};

enum class ConstraintKind {
  Balance,        // sum of outputs != demand
  LimitLower,     // p below p_min
  LimitUpper,     // p above p_max
  RampUp,         // increase above ramp_up
  RampDown,       // decrease above ramp_down
  ReserveNegative,   // sr < 0
  ReserveHeadroom,   // sr > p_max - p
  ReserveDelivery,   // sr > tau * ramp_up
  ReserveShortfall,  // sum sr < requirement
};

const char* to_string(ConstraintKind kind);

struct Violation {
  ConstraintKind kind{};
  int unit = -1;     // -1 for system-wide constraints
  int period = 0;
  int product = -1;  // reserve product index, -1 otherwise
  double magnitude = 0.0;  // MW beyond the limit
};

struct ViolationReport {
  std::vector<Violation> violations;
  double worst = 0.0;
  double tolerance = 0.0;
  bool feasible() const { return violations.empty(); }
};

}  // namespace ded
