#pragma once

#include <vector>

#include "ded/model.hpp"

namespace ded {

// Piecewise-linear lower approximation of true_cost on [p_min, p_max].
// Breakpoints sit every pi/(m*f) MW so each segment spans (1/m)-th of a sine
// half-period of the valve ripple; segment l interpolates the true cost
// between a_{l-1} and a_l (chords).
struct PiecewiseCost {
  int unit_id = 0;
  int m_param = 0;
  std::vector<double> breakpoints;  // a_0..a_L
  std::vector<double> slopes;       // k_1..k_L, $/MWh
  std::vector<double> intercepts;   // b_1..b_L, $/h
  int num_segments() const { return static_cast<int>(slopes.size()); }
};

// ceil(m*f*(p_max - p_min)/pi), clamped to 1 when f = 0 or the formula
// rounds to zero.
int segment_count(const GeneratorUnit& u, int m);

// a_l = min(p_min + l*pi/(m*f), p_max); strictly increasing, ends at p_max.
// Throws on m < 1 or p_min >= p_max.
std::vector<double> breakpoints(const GeneratorUnit& u, int m);

PiecewiseCost build_piecewise(const GeneratorUnit& u, int m);

// Interpolated cost at p; p outside [a_0, a_L] throws std::domain_error.
double approx_cost(const PiecewiseCost& pwc, double p);

struct ApproxErrorReport {
  double max_under = 0.0;  // max(c - c_hat, 0) over samples
  double max_over = 0.0;   // max(c_hat - c, 0) over samples
  bool is_lower_approx = true;
  int num_samples = 0;
};

// Samples n_samples uniformly spaced points over [p_min, p_max] (endpoints
// included).  is_lower_approx holds iff the over-shoot stays within
// 1e-6 * max(1, |c(p)|) at every sample.
ApproxErrorReport approx_error_report(const GeneratorUnit& u,
                                      const PiecewiseCost& pwc,
                                      int n_samples);

}  // namespace ded
