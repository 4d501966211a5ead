#include "ded/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ded/kernels.hpp"

namespace ded {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int8_t kAtLower = 0;
constexpr std::int8_t kAtUpper = 1;
constexpr std::int8_t kFree = 2;
constexpr std::int8_t kBasic = 3;

constexpr double kEtaDrop = 1e-12;    // drop tolerance inside factors
constexpr double kPivotZero = 1e-9;   // ratio-test zero threshold
constexpr double kWeakPivot = 1e-7;   // refactor before pivoting weaker
constexpr int kStallLimit = 600;      // degenerate steps before Bland kicks in
}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

BoundedSimplex::BoundedSimplex(const MilpInstance& milp, SimplexOptions opt)
    : n_(milp.num_cols), m_(milp.num_rows()), opt_(opt) {
  // structural columns (CSC) followed by one -e_r logical column per row
  std::vector<std::int64_t> count(var_count() + 1, 0);
  for (const MilpRow& row : milp.rows)
    for (std::int32_t j : row.cols) ++count[j + 1];
  for (int r = 0; r < m_; ++r) count[n_ + r + 1] = 1;
  col_start_.assign(var_count() + 1, 0);
  std::partial_sum(count.begin(), count.end(), col_start_.begin());
  col_rows_.resize(col_start_.back());
  col_vals_.resize(col_start_.back());
  std::vector<std::int64_t> fill(col_start_.begin(), col_start_.end() - 1);
  for (int r = 0; r < m_; ++r) {
    const MilpRow& row = milp.rows[r];
    for (size_t k = 0; k < row.cols.size(); ++k) {
      const std::int64_t at = fill[row.cols[k]]++;
      col_rows_[at] = r;
      col_vals_[at] = row.coefs[k];
    }
  }
  for (int r = 0; r < m_; ++r) {
    const std::int64_t at = fill[n_ + r]++;
    col_rows_[at] = r;
    col_vals_[at] = -1.0;
  }

  obj_.assign(var_count(), 0.0);
  std::copy(milp.objective.begin(), milp.objective.end(), obj_.begin());
  lb_.resize(var_count());
  ub_.resize(var_count());
  for (int j = 0; j < n_; ++j) {
    lb_[j] = milp.lower[j];
    ub_[j] = milp.upper[j];
  }
  for (int r = 0; r < m_; ++r) {
    const MilpRow& row = milp.rows[r];
    switch (row.sense) {
      case RowSense::LE: lb_[n_ + r] = -kInf; ub_[n_ + r] = row.rhs; break;
      case RowSense::EQ: lb_[n_ + r] = row.rhs; ub_[n_ + r] = row.rhs; break;
      case RowSense::GE: lb_[n_ + r] = row.rhs; ub_[n_ + r] = kInf; break;
    }
  }
  orig_lb_ = lb_;
  orig_ub_ = ub_;

  // initial basis: logicals basic, structurals at a finite bound
  vstat_.assign(var_count(), kAtLower);
  basic_.resize(m_);
  basis_pos_.assign(var_count(), -1);
  xval_.assign(var_count(), 0.0);
  for (int j = 0; j < n_; ++j) {
    if (lb_[j] > -kInf)
      vstat_[j] = kAtLower;
    else if (ub_[j] < kInf)
      vstat_[j] = kAtUpper;
    else
      vstat_[j] = kFree;
  }
  for (int r = 0; r < m_; ++r) {
    vstat_[n_ + r] = kBasic;
    basic_[r] = n_ + r;
    basis_pos_[n_ + r] = r;
  }
  snap_nonbasic();

  work_rows_.assign(m_, 0.0);
  work_pos_.assign(m_, 0.0);
  work_steps_.assign(m_, 0.0);
  pivrow_of_step_.assign(m_, -1);
  step_of_pos_.assign(m_, -1);
  rowperm_.assign(m_, -1);
}

void BoundedSimplex::set_bound(int col, double lower, double upper) {
  if (col < 0 || col >= n_) throw std::out_of_range("set_bound: bad column");
  lb_[col] = lower;
  ub_[col] = upper;
  if (vstat_[col] != kBasic) {
    if (vstat_[col] == kAtLower && lb_[col] == -kInf)
      vstat_[col] = ub_[col] < kInf ? kAtUpper : kFree;
    if (vstat_[col] == kAtUpper && ub_[col] == kInf)
      vstat_[col] = lb_[col] > -kInf ? kAtLower : kFree;
    xval_[col] = vstat_[col] == kAtLower   ? lb_[col]
                 : vstat_[col] == kAtUpper ? ub_[col]
                                           : 0.0;
  }
}

void BoundedSimplex::reset_bounds() {
  lb_ = orig_lb_;
  ub_ = orig_ub_;
  snap_nonbasic();
}

void BoundedSimplex::snap_nonbasic() {
  for (int j = 0; j < var_count(); ++j) {
    if (vstat_[j] == kBasic) continue;
    if (vstat_[j] == kAtLower && lb_[j] == -kInf)
      vstat_[j] = ub_[j] < kInf ? kAtUpper : kFree;
    else if (vstat_[j] == kAtUpper && ub_[j] == kInf)
      vstat_[j] = lb_[j] > -kInf ? kAtLower : kFree;
    xval_[j] = vstat_[j] == kAtLower   ? lb_[j]
               : vstat_[j] == kAtUpper ? ub_[j]
                                       : 0.0;
  }
}

double BoundedSimplex::col_dot(int j, const double* dense) const {
  const std::int64_t s = col_start_[j];
  return simd::gather_dot(col_rows_.data() + s, col_vals_.data() + s,
                          static_cast<std::size_t>(col_start_[j + 1] - s),
                          dense);
}

BoundedSimplex::Basis BoundedSimplex::basis() const { return vstat_; }

void BoundedSimplex::set_basis(const Basis& basis) {
  if (static_cast<int>(basis.size()) != var_count())
    throw std::invalid_argument("basis snapshot has wrong length");
  int nb = 0;
  for (std::int8_t s : basis) nb += (s == kBasic);
  if (nb != m_)
    throw std::invalid_argument("basis snapshot holds " + std::to_string(nb) +
                                " basic variables for " + std::to_string(m_) +
                                " rows");
  vstat_ = basis;
  basis_pos_.assign(var_count(), -1);
  int pos = 0;
  for (int j = 0; j < var_count(); ++j)
    if (vstat_[j] == kBasic) {
      basic_[pos] = j;
      basis_pos_[j] = pos;
      ++pos;
    }
  snap_nonbasic();
  factor_valid_ = false;
}

bool BoundedSimplex::factorize() {
  lcols_.clear();
  ucols_.clear();
  pfi_.clear();
  std::fill(rowperm_.begin(), rowperm_.end(), -1);
  std::fill(step_of_pos_.begin(), step_of_pos_.end(), -1);

  // process sparser columns first; ties by position for determinism
  std::vector<std::int32_t> order(m_);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [this](std::int32_t a, std::int32_t b) {
    const std::int64_t na = col_start_[basic_[a] + 1] - col_start_[basic_[a]];
    const std::int64_t nb = col_start_[basic_[b] + 1] - col_start_[basic_[b]];
    return na != nb ? na < nb : a < b;
  });

  std::vector<double>& v = work_rows_;
  std::fill(v.begin(), v.end(), 0.0);
  std::vector<std::int32_t> nz;
  std::vector<std::int8_t> in_nz(m_, 0);
  std::vector<std::int32_t> failed;
  int steps = 0;

  for (std::int32_t pos : order) {
    const int j = basic_[pos];
    nz.clear();
    for (std::int64_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      v[col_rows_[k]] = col_vals_[k];
      in_nz[col_rows_[k]] = 1;
      nz.push_back(col_rows_[k]);
    }
    EtaCol ucol;
    for (int s = 0; s < steps; ++s) {
      const std::int32_t pr = pivrow_of_step_[s];
      const double piv = v[pr];
      if (piv == 0.0) continue;
      ucol.idx.push_back(s);
      ucol.val.push_back(piv);
      const EtaCol& l = lcols_[s];
      for (size_t k = 0; k < l.idx.size(); ++k) {
        const std::int32_t r = l.idx[k];
        if (!in_nz[r]) {
          in_nz[r] = 1;
          nz.push_back(r);
        }
        v[r] -= l.val[k] * piv;
      }
    }
    // partial pivoting over rows not yet assigned
    std::int32_t p = -1;
    double best = kEtaDrop;
    for (std::int32_t r : nz)
      if (rowperm_[r] < 0 && std::fabs(v[r]) > best) {
        best = std::fabs(v[r]);
        p = r;
      }
    if (p < 0) {
      failed.push_back(pos);
      for (std::int32_t r : nz) {
        v[r] = 0.0;
        in_nz[r] = 0;
      }
      continue;
    }
    const double pivot_val = v[p];  // the cleanup below zeroes v[p] itself
    ucol.pivot = p;
    ucol.diag = pivot_val;
    EtaCol lcol;
    lcol.pivot = p;
    lcol.diag = pivot_val;
    for (std::int32_t r : nz) {
      if (rowperm_[r] < 0 && r != p && std::fabs(v[r]) > kEtaDrop) {
        lcol.idx.push_back(r);
        lcol.val.push_back(v[r] / pivot_val);
      }
      v[r] = 0.0;
      in_nz[r] = 0;
    }
    rowperm_[p] = steps;
    pivrow_of_step_[steps] = p;
    step_of_pos_[pos] = steps;
    lcols_.push_back(std::move(lcol));
    ucols_.push_back(std::move(ucol));
    ++steps;
  }

  // singular basis: swap the offending columns for unused rows' logicals
  if (!failed.empty()) {
    std::int32_t next_row = 0;
    for (std::int32_t pos : failed) {
      while (next_row < m_ && rowperm_[next_row] >= 0) ++next_row;
      const std::int32_t r = next_row;
      const int old = basic_[pos];
      basis_pos_[old] = -1;
      vstat_[old] = lb_[old] > -kInf ? kAtLower
                    : ub_[old] < kInf ? kAtUpper
                                      : kFree;
      xval_[old] = vstat_[old] == kAtLower   ? lb_[old]
                   : vstat_[old] == kAtUpper ? ub_[old]
                                             : 0.0;
      const int lg = n_ + r;
      // the unused row's logical cannot already be basic (it would have
      // pivoted its own row), so this swap is safe
      basic_[pos] = lg;
      basis_pos_[lg] = pos;
      vstat_[lg] = kBasic;
      EtaCol ucol, lcol;
      ucol.pivot = r;
      ucol.diag = -1.0;
      lcol.pivot = r;
      lcol.diag = -1.0;
      rowperm_[r] = steps;
      pivrow_of_step_[steps] = r;
      step_of_pos_[pos] = steps;
      lcols_.push_back(std::move(lcol));
      ucols_.push_back(std::move(ucol));
      ++steps;
    }
  }
  factor_valid_ = true;
  return failed.empty();
}

void BoundedSimplex::ftran(std::vector<double>& dense_rows,
                           std::vector<double>& out_pos,
                           std::vector<std::int32_t>& out_nz) const {
  std::vector<double>& v = dense_rows;
  for (size_t s = 0; s < lcols_.size(); ++s) {
    const double piv = v[pivrow_of_step_[s]];
    if (piv == 0.0) continue;
    const EtaCol& l = lcols_[s];
    for (size_t k = 0; k < l.idx.size(); ++k) v[l.idx[k]] -= l.val[k] * piv;
  }
  std::vector<double>& z = work_steps_;
  for (int s = m_ - 1; s >= 0; --s) {
    const EtaCol& u = ucols_[s];
    double t = v[pivrow_of_step_[s]] / u.diag;
    z[s] = t;
    if (t != 0.0)
      for (size_t k = 0; k < u.idx.size(); ++k)
        v[pivrow_of_step_[u.idx[k]]] -= u.val[k] * t;
  }
  for (int pos = 0; pos < m_; ++pos) out_pos[pos] = z[step_of_pos_[pos]];
  for (const EtaCol& e : pfi_) {
    const double piv = out_pos[e.pivot];
    if (piv == 0.0) continue;
    const double scaled = piv / e.diag;
    out_pos[e.pivot] = scaled;
    for (size_t k = 0; k < e.idx.size(); ++k)
      out_pos[e.idx[k]] -= e.val[k] * scaled;
  }
  out_nz.clear();
  for (int pos = 0; pos < m_; ++pos)
    if (std::fabs(out_pos[pos]) > kEtaDrop) out_nz.push_back(pos);
}

void BoundedSimplex::btran(const std::vector<double>& cost_pos,
                           std::vector<double>& y) const {
  std::vector<double> c = cost_pos;  // position space
  for (size_t e = pfi_.size(); e-- > 0;) {
    const EtaCol& eta = pfi_[e];
    const double dot =
        eta.idx.empty()
            ? 0.0
            : simd::gather_dot(eta.idx.data(), eta.val.data(), eta.idx.size(),
                               c.data());
    c[eta.pivot] = (c[eta.pivot] - dot) / eta.diag;
  }
  // reindex costs from basis position to elimination step
  std::vector<double>& chat = work_pos_;
  for (int pos = 0; pos < m_; ++pos) chat[step_of_pos_[pos]] = c[pos];
  // Ut t = chat: U's column s references earlier steps only
  std::vector<double>& t = work_steps_;
  for (int s = 0; s < m_; ++s) {
    const EtaCol& u = ucols_[s];
    const double acc = u.idx.empty() ? 0.0
                                     : simd::gather_dot(u.idx.data(),
                                                        u.val.data(),
                                                        u.idx.size(), t.data());
    t[s] = (chat[s] - acc) / u.diag;
  }
  y.assign(m_, 0.0);
  for (int s = m_ - 1; s >= 0; --s) {
    const EtaCol& l = lcols_[s];
    const double acc = l.idx.empty()
                           ? 0.0
                           : simd::gather_dot(l.idx.data(), l.val.data(),
                                              l.idx.size(), y.data());
    y[pivrow_of_step_[s]] = t[s] - acc;
  }
}

void BoundedSimplex::recompute_primal() {
  std::vector<double>& rhs = work_rows_;
  std::fill(rhs.begin(), rhs.end(), 0.0);
  for (int j = 0; j < var_count(); ++j) {
    if (vstat_[j] == kBasic || xval_[j] == 0.0) continue;
    const double xj = xval_[j];
    for (std::int64_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
      rhs[col_rows_[k]] -= col_vals_[k] * xj;
  }
  std::vector<double> xb(m_);
  std::vector<std::int32_t> nz;
  ftran(rhs, xb, nz);
  for (int pos = 0; pos < m_; ++pos) xval_[basic_[pos]] = xb[pos];
}

double BoundedSimplex::infeasibility(int j) const {
  const double x = xval_[j];
  if (x < lb_[j]) return lb_[j] - x;
  if (x > ub_[j]) return x - ub_[j];
  return 0.0;
}

LpSolution BoundedSimplex::finish(LpStatus status, long iterations) {
  if (!factor_valid_) factorize();
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations;
  sol.x.assign(xval_.begin(), xval_.begin() + n_);
  sol.objective = simd::dot(obj_.data(), sol.x.data(), n_);

  // dual objective from scratch: price with phase-2 costs, then accumulate
  // each bound's contribution.  Wrong-signed reduced costs on an infinite
  // bound contribute nothing (they are within tolerance at optimality).
  std::vector<double> cb(m_);
  for (int pos = 0; pos < m_; ++pos) cb[pos] = obj_[basic_[pos]];
  std::vector<double> y;
  btran(cb, y);
  double dual = 0.0;
  for (int j = 0; j < var_count(); ++j) {
    if (vstat_[j] == kBasic) continue;
    const double d = obj_[j] - col_dot(j, y.data());
    if (d > 0.0 && lb_[j] > -kInf)
      dual += d * lb_[j];
    else if (d < 0.0 && ub_[j] < kInf)
      dual += d * ub_[j];
  }
  sol.dual_objective = dual;
  return sol;
}

LpSolution BoundedSimplex::solve() {
  for (int j = 0; j < var_count(); ++j)
    if (lb_[j] > ub_[j] + 1e-12) return finish(LpStatus::Infeasible, 0);

  if (!factor_valid_ || pfi_.size() > 4 * static_cast<size_t>(opt_.refactor_every))
    factorize();
  recompute_primal();

  const double ftol = opt_.feasibility_tol;
  const double dtol = opt_.optimality_tol;
  long iterations = 0;
  int degenerate_run = 0;
  int cleanups = 0;
  bool bland = false;

  std::vector<double> cb(m_), y(m_), w(m_);
  std::vector<std::int32_t> wnz;
  std::vector<double> acol(m_);

  while (true) {
    if (iterations >= opt_.iteration_limit)
      return finish(LpStatus::IterationLimit, iterations);

    // current phase from basic infeasibilities
    bool phase1 = false;
    for (int pos = 0; pos < m_ && !phase1; ++pos)
      if (infeasibility(basic_[pos]) > ftol) phase1 = true;

    for (int pos = 0; pos < m_; ++pos) {
      const int j = basic_[pos];
      if (phase1)
        cb[pos] = xval_[j] < lb_[j] - ftol   ? -1.0
                  : xval_[j] > ub_[j] + ftol ? 1.0
                                             : 0.0;
      else
        cb[pos] = obj_[j];
    }
    btran(cb, y);

    // pricing: Dantzig by default, Bland after a degenerate stall
    int enter = -1;
    double enter_score = dtol;
    int enter_dir = 0;
    for (int j = 0; j < var_count(); ++j) {
      const std::int8_t st = vstat_[j];
      if (st == kBasic) continue;
      if (lb_[j] == ub_[j]) continue;
      const double d = (phase1 ? 0.0 : obj_[j]) - col_dot(j, y.data());
      int dir = 0;
      if (st == kAtLower) {
        if (d < -dtol) dir = 1;
      } else if (st == kAtUpper) {
        if (d > dtol) dir = -1;
      } else {  // free
        if (d < -dtol) dir = 1;
        else if (d > dtol) dir = -1;
      }
      if (!dir) continue;
      if (bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      const double score = std::fabs(d);
      if (score > enter_score) {
        enter_score = score;
        enter = j;
        enter_dir = dir;
      }
    }

    if (enter < 0) {
      // claim: phase-1 stuck => infeasible; otherwise optimal.  Verify the
      // claim on a freshly factorized basis once before trusting it.
      if (!pfi_.empty() && cleanups < 5) {
        ++cleanups;
        factorize();
        recompute_primal();
        continue;
      }
      if (phase1) return finish(LpStatus::Infeasible, iterations);
      return finish(LpStatus::Optimal, iterations);
    }

    // entering column through the basis
    std::fill(acol.begin(), acol.end(), 0.0);
    for (std::int64_t k = col_start_[enter]; k < col_start_[enter + 1]; ++k)
      acol[col_rows_[k]] = col_vals_[k];
    ftran(acol, w, wnz);

    // ratio test: first blocking event along x_enter = x0 + dir * t
    const double sigma = enter_dir;
    const double own_range = ub_[enter] - lb_[enter];
    double t_basic = kInf;
    int leave_pos = -1;
    std::int8_t leave_side = kAtLower;
    double best_pivot = 0.0;

    for (std::int32_t pos : wnz) {
      const double wp = w[pos];
      if (std::fabs(wp) <= kPivotZero) continue;
      const int j = basic_[pos];
      const double rate = sigma * wp;  // basic moves at -rate per unit t
      const double xj = xval_[j];
      double cand;
      std::int8_t side;
      if (phase1 && xj < lb_[j] - ftol) {
        // infeasible below: blocks only when climbing back to its lower bound
        if (rate >= 0.0) continue;
        cand = (xj - lb_[j]) / rate;
        side = kAtLower;
      } else if (phase1 && xj > ub_[j] + ftol) {
        if (rate <= 0.0) continue;
        cand = (xj - ub_[j]) / rate;
        side = kAtUpper;
      } else if (rate > 0.0) {
        if (lb_[j] == -kInf) continue;
        cand = (xj - lb_[j]) / rate;
        side = kAtLower;
      } else {
        if (ub_[j] == kInf) continue;
        cand = (xj - ub_[j]) / rate;
        side = kAtUpper;
      }
      if (cand < 0.0) cand = 0.0;  // degenerate beyond tolerance
      if (cand >= t_basic + 1e-10) continue;
      bool take = cand < t_basic - 1e-10;
      if (!take) {  // tie zone: prefer the stabler pivot, then lower index
        const double ap = std::fabs(wp), bp = std::fabs(best_pivot);
        take = ap > bp + 1e-12 ||
               (ap > bp - 1e-12 && leave_pos >= 0 && j < basic_[leave_pos]);
      }
      if (take) {
        t_basic = std::min(t_basic, cand);
        leave_pos = pos;
        leave_side = side;
        best_pivot = wp;
      }
    }

    if (t_basic == kInf && own_range == kInf) {
      if (!phase1) return finish(LpStatus::Unbounded, iterations);
      // phase-1 objective is bounded below; an unbounded ray here means the
      // factorization has degraded
      if (cleanups < 5) {
        ++cleanups;
        factorize();
        recompute_primal();
        continue;
      }
      return finish(LpStatus::IterationLimit, iterations);
    }

    const bool bound_flip = own_range <= t_basic + 1e-12;
    const double t_best = bound_flip ? own_range : t_basic;

    // weak pivot: rebuild factors once, then redo this iteration
    if (!bound_flip && std::fabs(best_pivot) < kWeakPivot && !pfi_.empty() &&
        cleanups < 5) {
      ++cleanups;
      factorize();
      recompute_primal();
      continue;
    }

    ++iterations;
    degenerate_run = t_best <= 1e-10 ? degenerate_run + 1 : 0;
    if (degenerate_run > kStallLimit) bland = true;
    if (degenerate_run == 0) bland = false;

    if (bound_flip) {
      const double t = own_range;
      for (std::int32_t pos : wnz) xval_[basic_[pos]] -= sigma * t * w[pos];
      xval_[enter] = vstat_[enter] == kAtUpper ? lb_[enter] : ub_[enter];
      vstat_[enter] = vstat_[enter] == kAtUpper ? kAtLower : kAtUpper;
      continue;
    }

    // pivot: update primal values, swap statuses, append a product-form eta
    const int leave = basic_[leave_pos];
    for (std::int32_t pos : wnz)
      if (pos != leave_pos) xval_[basic_[pos]] -= sigma * t_best * w[pos];
    xval_[enter] = xval_[enter] + sigma * t_best;
    xval_[leave] = leave_side == kAtLower ? lb_[leave] : ub_[leave];
    vstat_[leave] = lb_[leave] == ub_[leave] ? kAtLower : leave_side;
    vstat_[enter] = kBasic;
    basic_[leave_pos] = enter;
    basis_pos_[enter] = leave_pos;
    basis_pos_[leave] = -1;

    EtaCol eta;
    eta.pivot = leave_pos;
    eta.diag = w[leave_pos];
    for (std::int32_t pos : wnz)
      if (pos != leave_pos) {
        eta.idx.push_back(pos);
        eta.val.push_back(w[pos]);
      }
    pfi_.push_back(std::move(eta));

    if (static_cast<int>(pfi_.size()) >= opt_.refactor_every) {
      factorize();
      recompute_primal();
    }
    cleanups = 0;
  }
}

LpSolution solve_lp(const MilpInstance& milp, std::span<const ColBound> overrides,
                    const SimplexOptions& opt) {
  BoundedSimplex simplex(milp, opt);
  for (const ColBound& b : overrides) simplex.set_bound(b.col, b.lower, b.upper);
  return simplex.solve();
}

}  // namespace ded
