#pragma once

#include <cstdint>

#include "ded/bnb.hpp"
#include "ded/milp.hpp"
#include "ded/model.hpp"

namespace ded {

struct TinyLimits {
  long max_assignments = 1000000;
};

// Brute-force reference: visits every complete segment assignment (and every
// 0/1 pattern of binaries outside segment groups), fixes the binaries, solves
// the remaining LP, and keeps the best objective.  Ties resolve to the
// lexicographically first assignment in group order, so results are
// deterministic.  Candidate optima are re-verified against the raw rows, and
// single-unit instances additionally against the closed-form per-period cost,
// independently of the simplex internals.
BnbResult enumerate_solve(const MilpInstance& milp, const TinyLimits& limits = {});

// Deterministic instance generator for cross-checking the solver: physically
// sensible coefficient ranges, f sized to give 1..4 segments at m = 2,
// ramp-reachable demand, sometimes one reserve product.
SystemInstance random_instance(std::uint64_t seed, int n_units, int n_periods);

}  // namespace ded
