#pragma once

#include "ded/model.hpp"

namespace ded {

// Checks schedule feasibility against sys within an absolute MW tolerance.
// Reported order is deterministic: periods outermost, then balance, unit
// limits, ramps, reserves.  schedule.reserve may be empty (power-only check)
// or must carry one table per reserve product.  Ramp constraints at t = 0
// apply only to units with initial_power set.
ViolationReport validate_schedule(const SystemInstance& sys,
                                  const Schedule& schedule,
                                  double tolerance = 1e-6);

}  // namespace ded
