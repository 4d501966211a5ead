#include "ded/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ded/cost.hpp"

namespace ded {

namespace {
void check_pre(const GeneratorUnit& u, int m) {
  if (m < 1) throw std::invalid_argument("segment parameter m must be >= 1");
  if (!(u.p_min < u.p_max))
    throw std::invalid_argument("unit " + std::to_string(u.id) +
                                ": p_min must be below p_max");
}
}  // namespace

int segment_count(const GeneratorUnit& u, int m) {
  check_pre(u, m);
  if (u.f <= 0.0) return 1;
  const double raw = m * u.f * (u.p_max - u.p_min) / std::numbers::pi;
  const int l = static_cast<int>(std::ceil(raw));
  return std::max(l, 1);
}

std::vector<double> breakpoints(const GeneratorUnit& u, int m) {
  const int l = segment_count(u, m);
  std::vector<double> grid;
  grid.reserve(l + 1);
  grid.push_back(u.p_min);
  if (u.f > 0.0) {
    const double step = std::numbers::pi / (m * u.f);
    for (int i = 1; i < l; ++i)
      grid.push_back(std::min(u.p_min + i * step, u.p_max));
  }
  grid.push_back(u.p_max);
  return grid;
}

PiecewiseCost build_piecewise(const GeneratorUnit& u, int m) {
  PiecewiseCost pwc;
  pwc.unit_id = u.id;
  pwc.m_param = m;
  pwc.breakpoints = breakpoints(u, m);
  const int l = static_cast<int>(pwc.breakpoints.size()) - 1;
  pwc.slopes.reserve(l);
  pwc.intercepts.reserve(l);
  double c_prev = true_cost(u, pwc.breakpoints[0]);
  for (int s = 1; s <= l; ++s) {
    const double a0 = pwc.breakpoints[s - 1];
    const double a1 = pwc.breakpoints[s];
    const double c1 = true_cost(u, a1);
    const double k = (c1 - c_prev) / (a1 - a0);
    pwc.slopes.push_back(k);
    pwc.intercepts.push_back(c_prev - k * a0);
    c_prev = c1;
  }
  return pwc;
}

double approx_cost(const PiecewiseCost& pwc, double p) {
  const std::vector<double>& a = pwc.breakpoints;
  // absorb round-off from solver-extracted schedules sitting on an endpoint
  const double slack =
      1e-9 * std::max({1.0, std::fabs(a.front()), std::fabs(a.back())});
  if (!(p >= a.front() - slack) || !(p <= a.back() + slack))
    throw std::domain_error("power " + std::to_string(p) +
                            " outside linearized range [" +
                            std::to_string(a.front()) + ", " +
                            std::to_string(a.back()) + "]");
  p = std::clamp(p, a.front(), a.back());
  // first breakpoint strictly above p; segment index is its predecessor
  auto it = std::upper_bound(a.begin() + 1, a.end() - 1, p);
  const int s = static_cast<int>(it - a.begin()) - 1;
  return pwc.slopes[s] * p + pwc.intercepts[s];
}

ApproxErrorReport approx_error_report(const GeneratorUnit& u,
                                      const PiecewiseCost& pwc,
                                      int n_samples) {
  if (n_samples < 2)
    throw std::invalid_argument("error report needs at least 2 samples");
  ApproxErrorReport report;
  report.num_samples = n_samples;
  const double lo = pwc.breakpoints.front();
  const double hi = pwc.breakpoints.back();
  for (int s = 0; s < n_samples; ++s) {
    const double p =
        lo + (hi - lo) * static_cast<double>(s) / (n_samples - 1);
    const double exact = true_cost(u, p);
    const double chord = approx_cost(pwc, p);
    report.max_under = std::max(report.max_under, exact - chord);
    report.max_over = std::max(report.max_over, chord - exact);
    if (chord - exact > 1e-6 * std::max(1.0, std::fabs(exact)))
      report.is_lower_approx = false;
  }
  return report;
}

}  // namespace ded
