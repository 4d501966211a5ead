#include "ded/cost.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ded {

namespace {
void require_finite(double p) {
  if (!std::isfinite(p))
    throw std::invalid_argument("power level is not finite");
}
}  // namespace

double quadratic_cost(const GeneratorUnit& u, double p) {
  require_finite(p);
  return u.alpha + u.beta * p + u.gamma * p * p;
}

double vpe_cost(const GeneratorUnit& u, double p) {
  require_finite(p);
  return std::fabs(u.e * std::sin(u.f * (p - u.p_min)));
}

double true_cost(const GeneratorUnit& u, double p) {
  return quadratic_cost(u, p) + vpe_cost(u, p);
}

double schedule_cost(const SystemInstance& sys, const Schedule& schedule) {
  const Matrix& power = schedule.power;
  if (power.rows != sys.num_units() || power.cols != sys.num_periods())
    throw std::invalid_argument(
        "schedule is " + std::to_string(power.rows) + "x" +
        std::to_string(power.cols) + " but the instance has " +
        std::to_string(sys.num_units()) + " units and " +
        std::to_string(sys.num_periods()) + " periods");
  double total = 0.0;
  for (int i = 0; i < power.rows; ++i)
    for (int t = 0; t < power.cols; ++t)
      total += true_cost(sys.units[i], power.at(i, t));
  return total;
}

double optimality_gap(double z, double lower_bound) {
  if (!(lower_bound > 0.0))
    throw std::invalid_argument("optimality_gap needs a positive lower bound");
  return (z - lower_bound) / lower_bound;
}

}  // namespace ded
