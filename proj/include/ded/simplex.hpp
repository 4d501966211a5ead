#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ded/milp.hpp"

namespace ded {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> x;  // structural column values
  double objective = 0.0;
  double dual_objective = 0.0;
  long iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-7;  // bound violation tolerance
  double optimality_tol = 1e-9;   // reduced-cost threshold
  long iteration_limit = 500000;
  int refactor_every = 64;  // basis updates between refactorizations
};

struct ColBound {
  int col = 0;
  double lower = 0.0;
  double upper = 0.0;
};

// Primal simplex over general bounds, row logicals, sparse LU basis with
// product-form updates.  Composite phase 1 (minimize total bound violation)
// doubles as the warm-start repair after bound changes, so branch-and-bound
// can reuse the final basis of a parent node.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const MilpInstance& milp, SimplexOptions opt = {});

  // Tightens/overrides a structural column's bounds for subsequent solves.
  void set_bound(int col, double lower, double upper);
  void reset_bounds();  // restore the instance bounds

  LpSolution solve();

  // Per-variable status snapshot (structurals then logicals); restoring it
  // warm-starts the next solve.
  using Basis = std::vector<std::int8_t>;
  Basis basis() const;
  void set_basis(const Basis& basis);

 private:
  struct EtaCol {  // one LU elimination step or one product-form update
    std::int32_t pivot = 0;
    double diag = 0.0;
    std::vector<std::int32_t> idx;
    std::vector<double> val;
  };

  int var_count() const { return n_ + m_; }
  double col_dot(int j, const double* dense) const;
  bool factorize();
  void ftran(std::vector<double>& dense_rows, std::vector<double>& out_pos,
             std::vector<std::int32_t>& out_nz) const;
  void btran(const std::vector<double>& cost_pos, std::vector<double>& y) const;
  void recompute_primal();
  void snap_nonbasic();
  double infeasibility(int j) const;
  LpSolution finish(LpStatus status, long iterations);

  int n_ = 0;  // structural columns
  int m_ = 0;  // rows
  SimplexOptions opt_;
  // unified column-major matrix: structurals, then one -e_r logical per row
  std::vector<std::int64_t> col_start_;
  std::vector<std::int32_t> col_rows_;
  std::vector<double> col_vals_;
  std::vector<double> obj_;      // structural objective, zeros for logicals
  std::vector<double> lb_, ub_;  // current bounds, all variables
  std::vector<double> orig_lb_, orig_ub_;

  std::vector<std::int8_t> vstat_;
  std::vector<std::int32_t> basic_;      // variable at each basis position
  std::vector<std::int32_t> basis_pos_;  // inverse of basic_, -1 if nonbasic
  std::vector<double> xval_;             // current value of every variable

  // factorization state
  std::vector<EtaCol> lcols_, ucols_, pfi_;
  std::vector<std::int32_t> pivrow_of_step_, step_of_pos_, rowperm_;
  bool factor_valid_ = false;

  // scratch
  mutable std::vector<double> work_rows_, work_pos_, work_steps_;
  mutable std::vector<std::int32_t> touched_;
};

// One-shot LP relaxation solve (binary flags relaxed to their bounds).
LpSolution solve_lp(const MilpInstance& milp,
                    std::span<const ColBound> overrides = {},
                    const SimplexOptions& opt = {});

}  // namespace ded
