#include "ded/validate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ded {

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Balance: return "balance";
    case ConstraintKind::LimitLower: return "limit-lower";
    case ConstraintKind::LimitUpper: return "limit-upper";
    case ConstraintKind::RampUp: return "ramp-up";
    case ConstraintKind::RampDown: return "ramp-down";
    case ConstraintKind::ReserveNegative: return "reserve-negative";
    case ConstraintKind::ReserveHeadroom: return "reserve-headroom";
    case ConstraintKind::ReserveDelivery: return "reserve-delivery";
    case ConstraintKind::ReserveShortfall: return "reserve-shortfall";
  }
  return "?";
}

void SystemInstance::check() const {
  if (units.empty()) throw std::invalid_argument("instance has no units");
  if (demand.empty()) throw std::invalid_argument("instance has no periods");
  for (const GeneratorUnit& u : units) {
    const std::string tag = "unit " + std::to_string(u.id);
    if (!(u.p_min < u.p_max))
      throw std::invalid_argument(tag + ": p_min must be below p_max");
    if (u.p_min < 0.0)
      throw std::invalid_argument(tag + ": p_min must be nonnegative");
    if (u.ramp_up <= 0.0 || u.ramp_down <= 0.0)
      throw std::invalid_argument(tag + ": ramp limits must be positive");
    if (u.e < 0.0 || u.f < 0.0)
      throw std::invalid_argument(tag + ": e and f must be nonnegative");
    if (u.initial_power &&
        (*u.initial_power < u.p_min || *u.initial_power > u.p_max))
      throw std::invalid_argument(tag + ": initial power outside limits");
  }
  for (size_t t = 0; t < demand.size(); ++t)
    if (!(demand[t] > 0.0))
      throw std::invalid_argument("demand must be positive in period " +
                                  std::to_string(t + 1));
  for (size_t r = 0; r < reserves.size(); ++r) {
    const ReserveProduct& rp = reserves[r];
    const std::string tag = "reserve product " + std::to_string(r + 1);
    if (!(rp.tau_hours > 0.0))
      throw std::invalid_argument(tag + ": tau must be positive");
    if (rp.requirement.size() != demand.size())
      throw std::invalid_argument(tag + ": requirement length " +
                                  std::to_string(rp.requirement.size()) +
                                  " does not match horizon " +
                                  std::to_string(demand.size()));
    for (double v : rp.requirement)
      if (v < 0.0)
        throw std::invalid_argument(tag + ": negative requirement");
  }
}

bool SystemInstance::statically_feasible() const {
  double lo = 0.0, hi = 0.0;
  for (const GeneratorUnit& u : units) {
    lo += u.p_min;
    hi += u.p_max;
  }
  for (double d : demand)
    if (d < lo || d > hi) return false;
  return true;
}

ViolationReport validate_schedule(const SystemInstance& sys,
                                  const Schedule& schedule,
                                  double tolerance) {
  const int n = sys.num_units();
  const int horizon = sys.num_periods();
  const Matrix& power = schedule.power;
  if (power.rows != n || power.cols != horizon)
    throw std::invalid_argument("power table dimensions do not match instance");
  const bool with_reserve = !schedule.reserve.empty();
  if (with_reserve && schedule.reserve.size() != sys.reserves.size())
    throw std::invalid_argument(
        "schedule carries " + std::to_string(schedule.reserve.size()) +
        " reserve tables but the instance defines " +
        std::to_string(sys.reserves.size()) + " products");
  if (with_reserve)
    for (const Matrix& m : schedule.reserve)
      if (m.rows != n || m.cols != horizon)
        throw std::invalid_argument(
            "reserve table dimensions do not match instance");

  ViolationReport report;
  report.tolerance = tolerance;
  auto add = [&report](ConstraintKind kind, int unit, int period, int product,
                       double magnitude) {
    report.violations.push_back({kind, unit, period, product, magnitude});
    report.worst = std::max(report.worst, magnitude);
  };

  for (int t = 0; t < horizon; ++t) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += power.at(i, t);
    if (std::fabs(total - sys.demand[t]) > tolerance)
      add(ConstraintKind::Balance, -1, t, -1, std::fabs(total - sys.demand[t]));

    for (int i = 0; i < n; ++i) {
      const GeneratorUnit& u = sys.units[i];
      const double p = power.at(i, t);
      if (p < u.p_min - tolerance)
        add(ConstraintKind::LimitLower, i, t, -1, u.p_min - p);
      if (p > u.p_max + tolerance)
        add(ConstraintKind::LimitUpper, i, t, -1, p - u.p_max);

      double prev;
      if (t > 0)
        prev = power.at(i, t - 1);
      else if (u.initial_power)
        prev = *u.initial_power;
      else
        continue;
      const double delta = p - prev;
      if (delta > u.ramp_up + tolerance)
        add(ConstraintKind::RampUp, i, t, -1, delta - u.ramp_up);
      if (-delta > u.ramp_down + tolerance)
        add(ConstraintKind::RampDown, i, t, -1, -delta - u.ramp_down);
    }

    if (with_reserve) {
      for (size_t r = 0; r < sys.reserves.size(); ++r) {
        const ReserveProduct& product = sys.reserves[r];
        const Matrix& sr = schedule.reserve[r];
        double held = 0.0;
        for (int i = 0; i < n; ++i) {
          const GeneratorUnit& u = sys.units[i];
          const double v = sr.at(i, t);
          held += v;
          if (v < -tolerance)
            add(ConstraintKind::ReserveNegative, i, t, static_cast<int>(r), -v);
          const double headroom = u.p_max - power.at(i, t);
          if (v > headroom + tolerance)
            add(ConstraintKind::ReserveHeadroom, i, t, static_cast<int>(r),
                v - headroom);
          const double deliverable = product.tau_hours * u.ramp_up;
          if (v > deliverable + tolerance)
            add(ConstraintKind::ReserveDelivery, i, t, static_cast<int>(r),
                v - deliverable);
        }
        if (held < product.requirement[t] - tolerance)
          add(ConstraintKind::ReserveShortfall, -1, t, static_cast<int>(r),
              product.requirement[t] - held);
      }
    }
  }
  return report;
}

}  // namespace ded
