#pragma once

#include "ded/model.hpp"

namespace ded {

// alpha + beta p + gamma p^2
double quadratic_cost(const GeneratorUnit& u, double p);

// |e sin(f (p - p_min))|
double vpe_cost(const GeneratorUnit& u, double p);

// Sum of the two.  p may lie outside [p_min, p_max]; cost extrapolates.
// Non-finite p throws std::invalid_argument.
double true_cost(const GeneratorUnit& u, double p);

// Sum of true_cost over every (unit, period) entry.  Dimensions of
// schedule.power must match the instance.
double schedule_cost(const SystemInstance& sys, const Schedule& schedule);

// (z - lower_bound) / lower_bound; requires lower_bound > 0.
double optimality_gap(double z, double lower_bound);

}  // namespace ded
