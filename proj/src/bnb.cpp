#include "ded/bnb.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace ded {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Fix {
  std::int32_t col;
  std::int8_t val;
};

struct Node {
  long id = 0;
  long parent = -1;
  int depth = 0;
  double bound = -kInf;  // parent LP objective, valid for the whole subtree
  std::vector<Fix> fixes;
  BoundedSimplex::Basis basis;  // empty => cold start
  int branch_col = -1;          // fix added relative to the parent
  std::int8_t branch_dir = 0;
  double branch_frac = 0.5;
};

struct PseudoCost {
  double up_sum = 0.0, down_sum = 0.0;
  long up_cnt = 0, down_cnt = 0;
};

// What one node's processing produced; applied to shared state under lock.
struct Outcome {
  std::optional<Node> children[2];
  bool prefer_one = false;
  std::vector<double> incumbent_x;
  double incumbent_obj = kInf;
  bool incumbent_heuristic = false;
  int pc_col = -1;
  bool pc_up = false;
  double pc_degrade = 0.0;
  std::string trace;
};

class BnbSolver {
 public:
  BnbSolver(const MilpInstance& milp, const SolverConfig& cfg)
      : milp_(milp), cfg_(cfg) {
    milp.check();
    if (!(cfg.rgap_target >= 0.0))
      throw std::invalid_argument("rgap_target must be nonnegative");
    if (!(cfg.feasibility_tol > 0.0) || !(cfg.integrality_tol > 0.0))
      throw std::invalid_argument("tolerances must be positive");
    for (int j = 0; j < milp.num_cols; ++j)
      if (milp.is_binary[j]) binary_cols_.push_back(j);
    col_group_.assign(milp.num_cols, -1);
    col_segment_.assign(milp.num_cols, -1);
    for (size_t g = 0; g < milp.groups.size(); ++g) {
      const SegmentGroup& grp = milp.groups[g];
      for (int l = 0; l < grp.num_segments; ++l) {
        col_group_[grp.u_col(l)] = static_cast<int>(g);
        col_segment_[grp.u_col(l)] = l;
      }
    }
    pc_.assign(milp.num_cols, PseudoCost{});
  }

  BnbResult run() {
    start_ = std::chrono::steady_clock::now();
    const int workers = std::max(cfg_.threads, 1);
    active_bound_.assign(workers, kInf);
    {
      std::lock_guard<std::mutex> lock(mu_);
      Node root;
      root.id = next_id_++;
      push_node(std::move(root));
    }

    if (workers == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([this, w] { worker(w); });
      for (std::thread& th : pool) th.join();
    }

    BnbResult res;
    res.nodes_processed = std::max(0L, processed_ - 1);
    res.wall_time = elapsed();
    if (stop_reason_) {
      res.status = *stop_reason_;
      res.best_bound =
          incumbent_ ? std::min(final_bound_, incumbent_obj_) : final_bound_;
    } else if (incumbent_) {
      res.status = MilpStatus::Optimal;
      res.best_bound = incumbent_obj_;
    } else {
      res.status = MilpStatus::Infeasible;
      res.best_bound = kInf;
    }
    if (incumbent_) {
      res.incumbent = incumbent_;
      res.incumbent_obj = incumbent_obj_;
      res.achieved_rgap =
          std::max(0.0, (res.incumbent_obj - res.best_bound) /
                            std::max(std::fabs(res.best_bound), 1e-10));
    }
    return res;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  // ---- open-node pool; callers hold mu_ ----

  void push_node(Node node) {
    open_bounds_.insert(node.bound);
    if (cfg_.node_selection == NodeSelection::DepthFirstPlunge)
      stack_.push_back(std::move(node));
    else
      heap_.emplace(std::make_pair(node.bound, node.id), std::move(node));
  }

  std::optional<Node> pop_node() {
    if (cfg_.node_selection == NodeSelection::DepthFirstPlunge) {
      if (stack_.empty()) return std::nullopt;
      Node node = std::move(stack_.back());
      stack_.pop_back();
      open_bounds_.erase(open_bounds_.find(node.bound));
      return node;
    }
    if (heap_.empty()) return std::nullopt;
    auto it = heap_.begin();
    Node node = std::move(it->second);
    heap_.erase(it);
    open_bounds_.erase(open_bounds_.find(node.bound));
    return node;
  }

  bool open_empty() const {
    return cfg_.node_selection == NodeSelection::DepthFirstPlunge
               ? stack_.empty()
               : heap_.empty();
  }

  double global_bound() const {
    double bb = open_bounds_.empty() ? kInf : *open_bounds_.begin();
    for (double b : active_bound_) bb = std::min(bb, b);
    return bb;
  }

  double gap_vs(double bound) const {
    if (!incumbent_) return kInf;
    const double bb = std::min(bound, incumbent_obj_);
    return (incumbent_obj_ - bb) / std::max(std::fabs(bb), 1e-10);
  }

  void trace_line(const std::string& line) {
    if (cfg_.trace && !line.empty()) *cfg_.trace << line << '\n';
  }

  void note_bound_change() {
    if (!cfg_.trace) return;
    char buf[160];
    std::snprintf(buf, sizeof buf, "bound best=%.9f incumbent=%.9f gap=%.3e",
                  std::min(global_bound(), incumbent_obj_),
                  incumbent_ ? incumbent_obj_ : kInf,
                  gap_vs(global_bound()));
    trace_line(buf);
  }

  void set_incumbent(std::vector<double> x, double obj, const char* source,
                     long node_id) {
    if (incumbent_ && obj >= incumbent_obj_ - 1e-12) return;
    incumbent_ = std::move(x);
    incumbent_obj_ = obj;
    inc_view_.store(obj, std::memory_order_relaxed);
    plunge_credit_ = 32;
    if (cfg_.trace) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "incumbent obj=%.9f node=%ld source=%s",
                    obj, node_id, source);
      trace_line(buf);
    }
  }

  // ---- per-worker driver ----

  void worker(int wid) {
    BoundedSimplex sx(milp_, cfg_.lp);
    const BoundedSimplex::Basis cold = sx.basis();
    std::optional<Node> carried;
    std::unique_lock<std::mutex> lock(mu_);

    while (true) {
      if (!stop_reason_) {
        if (elapsed() > cfg_.time_limit) {
          stop_reason_ = MilpStatus::TimeLimit;
          final_bound_ = global_bound();
        } else if (processed_ - 1 >= cfg_.node_limit) {
          stop_reason_ = MilpStatus::NodeLimit;
          final_bound_ = global_bound();
        } else if (incumbent_ &&
                   !(open_empty() && busy_ == 0 && !carried) &&
                   gap_vs(global_bound()) <= cfg_.rgap_target) {
          stop_reason_ = MilpStatus::GapReached;
          final_bound_ = global_bound();
        }
      }
      if (stop_reason_) {
        cv_.notify_all();
        break;
      }

      std::optional<Node> node;
      if (carried) {
        node.swap(carried);
      } else {
        node = pop_node();
        if (!node) {
          if (busy_ == 0) {
            cv_.notify_all();
            break;
          }
          cv_.wait(lock);
          continue;
        }
      }

      ++processed_;
      if (incumbent_ && node->bound >= incumbent_obj_ - 1e-9) {
        if (cfg_.trace) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "node id=%ld parent=%ld depth=%d bound=%.9f "
                        "action=prune-bound",
                        node->id, node->parent, node->depth, node->bound);
          trace_line(buf);
        }
        continue;
      }

      const bool keep_basis = open_bounds_.size() < 20000;
      ++busy_;
      active_bound_[wid] = node->bound;
      lock.unlock();
      Outcome out = process(sx, cold, *node, keep_basis);
      lock.lock();
      --busy_;
      active_bound_[wid] = kInf;

      if (out.incumbent_obj < kInf)
        set_incumbent(std::move(out.incumbent_x), out.incumbent_obj,
                      out.incumbent_heuristic ? "heuristic" : "lp", node->id);
      if (out.pc_col >= 0) {
        PseudoCost& pc = pc_[out.pc_col];
        std::lock_guard<std::mutex> pclock(pc_mu_);
        if (out.pc_up) {
          pc.up_sum += out.pc_degrade;
          ++pc.up_cnt;
        } else {
          pc.down_sum += out.pc_degrade;
          ++pc.down_cnt;
        }
      }
      trace_line(out.trace);

      if (out.children[0]) {
        const int first = out.prefer_one ? 1 : 0;
        if (cfg_.node_selection == NodeSelection::DepthFirstPlunge) {
          push_node(std::move(*out.children[1 - first]));
          push_node(std::move(*out.children[first]));
        } else if (plunge_credit_ > 0) {
          --plunge_credit_;
          carried = std::move(*out.children[first]);
          push_node(std::move(*out.children[1 - first]));
        } else {
          push_node(std::move(*out.children[0]));
          push_node(std::move(*out.children[1]));
        }
      }
      note_bound_change();
      cv_.notify_all();
    }
  }

  // Applies path fixes as bounds.  Returns false on a one-hot conflict.
  bool apply_node(BoundedSimplex& sx, const Node& node) const {
    sx.reset_bounds();
    // ones/zeros bitmasks per touched group
    std::unordered_map<int, std::pair<std::uint64_t, std::uint64_t>> state;
    for (const Fix& fx : node.fixes) {
      const int g = col_group_[fx.col];
      if (g < 0) {
        sx.set_bound(fx.col, fx.val, fx.val);
        continue;
      }
      auto& [ones, zeros] = state[g];
      if (fx.val)
        ones |= 1ull << col_segment_[fx.col];
      else
        zeros |= 1ull << col_segment_[fx.col];
    }
    for (const auto& [g, masks] : state) {
      const auto [ones, zeros] = masks;
      const SegmentGroup& grp = milp_.groups[g];
      const int segs = grp.num_segments;
      const std::uint64_t all =
          segs >= 64 ? ~0ull : (1ull << segs) - 1;
      if (std::popcount(ones) > 1 || (ones & zeros) != 0 || zeros == all)
        return false;
      std::uint64_t live = ones ? ones : (all & ~zeros);
      if (std::popcount(live) == 1) {
        const int l = std::countr_zero(live);
        for (int k = 0; k < segs; ++k) {
          const double v = k == l ? 1.0 : 0.0;
          sx.set_bound(grp.u_col(k), v, v);
          if (k != l) sx.set_bound(grp.pl_col(k), 0.0, 0.0);
        }
        sx.set_bound(grp.pl_col(l), grp.breakpoints[l],
                     grp.breakpoints[l + 1]);
        sx.set_bound(grp.p_col, grp.breakpoints[l], grp.breakpoints[l + 1]);
      } else {
        int lo = std::countr_zero(live);
        int hi = 63 - std::countl_zero(live);
        for (int k = 0; k < segs; ++k)
          if (zeros & (1ull << k)) {
            sx.set_bound(grp.u_col(k), 0.0, 0.0);
            sx.set_bound(grp.pl_col(k), 0.0, 0.0);
          }
        sx.set_bound(grp.p_col, grp.breakpoints[lo], grp.breakpoints[hi + 1]);
      }
    }
    return true;
  }

  // Chooses the branching column from an LP point; -1 when integral.
  int pick_branch(const std::vector<double>& x, double* frac_out,
                  int* frac_count) {
    const bool use_pc = cfg_.branching_rule == BranchRule::PseudoCost;
    std::unique_lock<std::mutex> pclock(pc_mu_, std::defer_lock);
    if (use_pc) pclock.lock();
    int best = -1;
    double best_score = 0.0;
    int count = 0;
    for (int j : binary_cols_) {
      const double v = x[j];
      const double dist = std::min(v - std::floor(v), std::ceil(v) - v);
      if (dist <= cfg_.integrality_tol) continue;
      ++count;
      double score = dist;
      if (use_pc) {
        const PseudoCost& pc = pc_[j];
        const double up = pc.up_cnt ? pc.up_sum / pc.up_cnt : 1.0;
        const double down = pc.down_cnt ? pc.down_sum / pc.down_cnt : 1.0;
        const double f = v - std::floor(v);
        score = std::max(f * down, 1e-8) * std::max((1.0 - f) * up, 1e-8);
      }
      if (best < 0 || score > best_score + 1e-15) {
        best = j;
        best_score = score;
        if (frac_out) *frac_out = v - std::floor(v);
      }
    }
    if (frac_count) *frac_count = count;
    return best;
  }

  // Rounds the LP point to a full segment assignment and repairs by LP.
  void try_heuristic(BoundedSimplex& sx, const std::vector<double>& x,
                     Outcome& out) {
    for (const SegmentGroup& grp : milp_.groups) {
      const double p = x[grp.p_col];
      int pick = 0;
      double best_dist = kInf;
      for (int l = 0; l < grp.num_segments; ++l) {
        const double lo = grp.breakpoints[l], hi = grp.breakpoints[l + 1];
        const double dist = p < lo ? lo - p : p > hi ? p - hi : 0.0;
        if (dist < best_dist - 1e-12) {
          best_dist = dist;
          pick = l;
        }
      }
      for (int l = 0; l < grp.num_segments; ++l) {
        const double v = l == pick ? 1.0 : 0.0;
        sx.set_bound(grp.u_col(l), v, v);
        if (l != pick) sx.set_bound(grp.pl_col(l), 0.0, 0.0);
      }
      sx.set_bound(grp.pl_col(pick), grp.breakpoints[pick],
                   grp.breakpoints[pick + 1]);
      sx.set_bound(grp.p_col, grp.breakpoints[pick],
                   grp.breakpoints[pick + 1]);
    }
    for (int j : binary_cols_)
      if (col_group_[j] < 0) {
        const double v = std::round(x[j]);
        sx.set_bound(j, v, v);
      }
    const LpSolution fixed = sx.solve();
    if (fixed.status == LpStatus::Optimal &&
        fixed.objective < inc_view_.load(std::memory_order_relaxed) - 1e-12 &&
        fixed.objective < out.incumbent_obj) {
      out.incumbent_x = fixed.x;
      out.incumbent_obj = fixed.objective;
      out.incumbent_heuristic = true;
    }
  }

  Outcome process(BoundedSimplex& sx, const BoundedSimplex::Basis& cold,
                  const Node& node, bool keep_basis) {
    Outcome out;
    char buf[200];
    if (!apply_node(sx, node)) {
      std::snprintf(buf, sizeof buf,
                    "node id=%ld parent=%ld depth=%d bound=%.9f "
                    "action=prune-conflict",
                    node.id, node.parent, node.depth, node.bound);
      out.trace = buf;
      return out;
    }
    sx.set_basis(node.basis.empty() ? cold : node.basis);
    LpSolution lp = sx.solve();
    if (lp.status == LpStatus::IterationLimit && !node.basis.empty()) {
      sx.set_basis(cold);
      lp = sx.solve();
    }
    if (lp.status == LpStatus::Unbounded)
      throw std::runtime_error(
          "LP relaxation is unbounded; the model has no finite optimum");

    if (lp.status == LpStatus::Infeasible) {
      std::snprintf(buf, sizeof buf,
                    "node id=%ld parent=%ld depth=%d bound=%.9f "
                    "action=prune-infeasible",
                    node.id, node.parent, node.depth, node.bound);
      out.trace = buf;
      return out;
    }

    const double bound = std::max(node.bound, lp.objective);
    if (node.branch_col >= 0 && lp.status == LpStatus::Optimal) {
      out.pc_col = node.branch_col;
      out.pc_up = node.branch_dir == 1;
      const double denom =
          out.pc_up ? 1.0 - node.branch_frac : node.branch_frac;
      out.pc_degrade =
          std::max(0.0, lp.objective - node.bound) / std::max(denom, 1e-6);
    }

    // fathom by bound against a possibly stale incumbent view (safe: stale
    // values only miss a pruning opportunity)
    const double inc = inc_view_.load(std::memory_order_relaxed);
    if (lp.status == LpStatus::Optimal && bound >= inc - 1e-9) {
      std::snprintf(buf, sizeof buf,
                    "node id=%ld parent=%ld depth=%d bound=%.9f "
                    "action=prune-bound",
                    node.id, node.parent, node.depth, bound);
      out.trace = buf;
      return out;
    }

    int frac_count = 0;
    double frac = 0.5;
    int branch_col;
    BoundedSimplex::Basis node_basis;
    if (lp.status == LpStatus::Optimal) {
      branch_col = pick_branch(lp.x, &frac, &frac_count);
      if (keep_basis) node_basis = sx.basis();
    } else {
      branch_col = first_unfixed_binary(node);  // LP stalled: split blindly
    }

    if (lp.status == LpStatus::Optimal && branch_col < 0) {
      out.incumbent_x = lp.x;
      out.incumbent_obj = lp.objective;
      std::snprintf(buf, sizeof buf,
                    "node id=%ld parent=%ld depth=%d bound=%.9f "
                    "action=integer obj=%.9f",
                    node.id, node.parent, node.depth, bound, lp.objective);
      out.trace = buf;
      return out;
    }
    if (branch_col < 0) {
      std::snprintf(buf, sizeof buf,
                    "node id=%ld parent=%ld depth=%d bound=%.9f "
                    "action=lp-stall",
                    node.id, node.parent, node.depth, bound);
      out.trace = buf;
      return out;
    }

    if (lp.status == LpStatus::Optimal &&
        (node.id == 0 || frac_count <= 3 || node.id % 16 == 0))
      try_heuristic(sx, lp.x, out);

    std::snprintf(buf, sizeof buf,
                  "node id=%ld parent=%ld depth=%d bound=%.9f action=branch "
                  "col=%d frac=%.4f nfrac=%d",
                  node.id, node.parent, node.depth, bound, branch_col, frac,
                  frac_count);
    out.trace = buf;

    for (int dir = 0; dir < 2; ++dir) {
      Node child;
      child.id = next_id_.fetch_add(1, std::memory_order_relaxed);
      child.parent = node.id;
      child.depth = node.depth + 1;
      child.bound = bound;
      child.fixes = node.fixes;
      child.fixes.push_back({branch_col, static_cast<std::int8_t>(dir)});
      child.branch_col = branch_col;
      child.branch_dir = static_cast<std::int8_t>(dir);
      child.branch_frac = frac;
      child.basis = node_basis;
      out.children[dir] = std::move(child);
    }
    out.prefer_one = frac >= 0.5;
    return out;
  }

  int first_unfixed_binary(const Node& node) const {
    for (int j : binary_cols_) {
      bool fixed = false;
      for (const Fix& fx : node.fixes)
        if (fx.col == j) {
          fixed = true;
          break;
        }
      if (!fixed) return j;
    }
    return -1;
  }

  const MilpInstance& milp_;
  SolverConfig cfg_;
  std::vector<int> binary_cols_;
  std::vector<int> col_group_, col_segment_;

  std::mutex mu_, pc_mu_;
  std::condition_variable cv_;
  std::map<std::pair<double, long>, Node> heap_;
  std::vector<Node> stack_;
  std::multiset<double> open_bounds_;
  std::vector<double> active_bound_;
  std::optional<std::vector<double>> incumbent_;
  double incumbent_obj_ = kInf;
  std::atomic<double> inc_view_{kInf};
  double final_bound_ = kInf;
  std::optional<MilpStatus> stop_reason_;
  std::atomic<long> next_id_{0};
  long processed_ = 0;
  int busy_ = 0;
  int plunge_credit_ = 0;
  std::vector<PseudoCost> pc_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

const char* to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::GapReached: return "gap-reached";
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::TimeLimit: return "time-limit";
    case MilpStatus::NodeLimit: return "node-limit";
    case MilpStatus::Infeasible: return "infeasible";
  }
  return "?";
}

BnbResult solve_milp(const MilpInstance& milp, const SolverConfig& config) {
  BnbSolver solver(milp, config);
  return solver.run();
}

}  // namespace ded
