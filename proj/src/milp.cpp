#include "netfec/milp.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <queue>

#include "netfec/error.hpp"

namespace netfec {
namespace {

constexpr double kPrimalTol = 1e-7;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-7;
constexpr double kIntTol = 1e-6;
constexpr int kRefactorEvery = 100;
constexpr int kMaxUnshiftRounds = 8;

}  // namespace

DualSimplex::DualSimplex(std::vector<double> cost, std::vector<double> lo, std::vector<double> hi,
                         const std::vector<SparseRow>& rows)
    : n_(static_cast<int>(cost.size())),
      m_(static_cast<int>(rows.size())),
      ntot_(n_ + m_),
      cost_(std::move(cost)),
      lo_(std::move(lo)),
      hi_(std::move(hi)) {
  if (lo_.size() != cost_.size() || hi_.size() != cost_.size()) {
    throw Error(ErrorCode::kDomain, "bound vectors do not match the cost vector");
  }
  cols_.assign(n_, {});
  b_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const auto& row = rows[i];
    for (std::size_t k = 0; k < row.idx.size(); ++k) {
      if (row.val[k] != 0.0) cols_[row.idx[k]].push_back({i, row.val[k]});
    }
    b_[i] = row.rhs;
  }
  cost_.resize(ntot_, 0.0);
  true_cost_ = cost_;
  lo_.resize(ntot_, 0.0);
  hi_.resize(ntot_, kInf);

  at_upper_.assign(ntot_, 0);
  for (int j = 0; j < n_; ++j) {
    at_upper_[j] = cost_[j] < 0.0;
    if (!std::isfinite(nonbasic_value(j))) {
      throw Error(ErrorCode::kDomain, "no finite bound for a dual-feasible start");
    }
  }
  basis_.resize(m_);
  row_of_.assign(ntot_, -1);
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    row_of_[n_ + i] = i;
  }
  rho_.resize(m_);
  alpha_col_.resize(m_);
  alpha_row_.resize(ntot_);
  refactor();
}

void DualSimplex::ftran(int j, std::vector<double>& out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (j >= n_) {
    const double* col = &binv_[static_cast<std::size_t>(j - n_) * m_];
    std::copy(col, col + m_, out.begin());
    return;
  }
  for (const auto& e : cols_[j]) {
    const double* col = &binv_[static_cast<std::size_t>(e.row) * m_];
    for (int i = 0; i < m_; ++i) out[i] += e.val * col[i];
  }
}

double DualSimplex::row_dot(const std::vector<double>& rho, int j) const {
  if (j >= n_) return rho[j - n_];
  double s = 0.0;
  for (const auto& e : cols_[j]) s += e.val * rho[e.row];
  return s;
}

void DualSimplex::refactor() {
  // Basic slacks make B block triangular, so only the block of basic
  // structurals against the rows without a basic slack needs inverting:
  //   B = [A_RJ 0; A_CJ I]  ->  B^{-1} = [M 0; -A_CJ M I],  M = A_RJ^{-1}.
  // A numerically singular block falls back to the slack basis, which is
  // dual feasible by construction.
  std::vector<int> jpos, rrow;  // basis positions of structurals, rows R
  std::vector<int> rindex(m_, -1);
  std::vector<char> covered(m_, 0);
  for (int k = 0; k < m_; ++k) {
    if (basis_[k] >= n_) {
      covered[basis_[k] - n_] = 1;
    } else {
      jpos.push_back(k);
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (!covered[i]) {
      rindex[i] = static_cast<int>(rrow.size());
      rrow.push_back(i);
    }
  }
  const int kk = static_cast<int>(jpos.size());
  bool singular = static_cast<int>(rrow.size()) != kk;
  // Gauss-Jordan on [A_RJ' | I]: row p is basic structural p.
  const int w = 2 * kk;
  std::vector<double> aug(static_cast<std::size_t>(kk) * w, 0.0);
  auto at = [&](int i, int j) -> double& { return aug[static_cast<std::size_t>(i) * w + j]; };
  if (!singular) {
    for (int p = 0; p < kk; ++p) {
      for (const auto& e : cols_[basis_[jpos[p]]]) {
        if (rindex[e.row] >= 0) at(rindex[e.row], p) = e.val;
      }
      at(p, kk + p) = 1.0;
    }
    for (int k = 0; k < kk && !singular; ++k) {
      int best = k;
      for (int i = k + 1; i < kk; ++i) {
        if (std::abs(at(i, k)) > std::abs(at(best, k))) best = i;
      }
      if (std::abs(at(best, k)) < 1e-11) {
        singular = true;
        break;
      }
      if (best != k) {
        for (int j = 0; j < w; ++j) std::swap(at(k, j), at(best, j));
      }
      const double inv = 1.0 / at(k, k);
      for (int j = k; j < w; ++j) at(k, j) *= inv;
      for (int i = 0; i < kk; ++i) {
        if (i == k) continue;
        const double f = at(i, k);
        if (f == 0.0) continue;
        for (int j = k; j < w; ++j) at(i, j) -= f * at(k, j);
      }
    }
  }
  // After elimination the right block holds A_RJ^{-1}: entry (p, rr) maps
  // row R[rr] to basic structural p.
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  if (singular) {
    for (int j = 0; j < ntot_; ++j) row_of_[j] = -1;
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      row_of_[n_ + i] = i;
      binv(i, i) = 1.0;
    }
    for (int j = 0; j < n_; ++j) at_upper_[j] = cost_[j] < 0.0;
  } else {
    for (int p = 0; p < kk; ++p) {
      for (int rr = 0; rr < kk; ++rr) binv(jpos[p], rrow[rr]) = at(p, kk + rr);
    }
    for (int k = 0; k < m_; ++k) {
      const int j = basis_[k];
      if (j < n_) continue;
      const int c = j - n_;
      binv(k, c) = 1.0;
      // -A_cJ M
      for (int p = 0; p < kk; ++p) {
        double a = 0.0;
        for (const auto& e : cols_[basis_[jpos[p]]]) {
          if (e.row == c) {
            a = e.val;
            break;
          }
        }
        if (a == 0.0) continue;
        for (int rr = 0; rr < kk; ++rr) binv(k, rrow[rr]) -= a * at(p, kk + rr);
      }
    }
  }

  weight_.assign(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    const double* col = &binv_[static_cast<std::size_t>(k) * m_];
    for (int i = 0; i < m_; ++i) weight_[i] += col[i] * col[i];
  }

  since_refactor_ = 0;
  recompute_duals_and_values();
}

void DualSimplex::recompute_duals_and_values() {
  // y = c_B' B^{-1}, d_j = c_j - y a_j
  std::vector<double> y(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    const double cb = cost_[basis_[k]];
    if (cb == 0.0) continue;
    for (int i = 0; i < m_; ++i) y[i] += cb * binv(k, i);
  }
  d_.assign(ntot_, 0.0);
  for (int j = 0; j < ntot_; ++j) {
    if (row_of_[j] >= 0) continue;
    d_[j] = cost_[j] - row_dot(y, j);
    // Drift can leave a reduced cost on the wrong side; flip when possible.
    if (!at_upper_[j] && d_[j] < -kDualTol && std::isfinite(hi_[j])) at_upper_[j] = 1;
    if (at_upper_[j] && d_[j] > kDualTol && std::isfinite(lo_[j])) at_upper_[j] = 0;
  }

  std::vector<double> r = b_;
  for (int j = 0; j < ntot_; ++j) {
    if (row_of_[j] >= 0) continue;
    const double x = nonbasic_value(j);
    if (x == 0.0) continue;
    if (j >= n_) {
      r[j - n_] -= x;
    } else {
      for (const auto& e : cols_[j]) r[e.row] -= e.val * x;
    }
  }
  beta_.assign(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    if (r[k] == 0.0) continue;
    const double* col = &binv_[static_cast<std::size_t>(k) * m_];
    for (int i = 0; i < m_; ++i) beta_[i] += r[k] * col[i];
  }
}

DualSimplex::Status DualSimplex::solve(std::int64_t max_iterations) {
  int unshift_rounds = 0;
  for (std::int64_t it = 0; it < max_iterations; ++it) {
    if (since_refactor_ >= kRefactorEvery) refactor();

    // Dual steepest edge: largest infeasibility^2 / ||e_r' B^{-1}||^2.
    int r = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      double infeas = 0.0;
      if (beta_[i] < lo_[j] - kPrimalTol) infeas = lo_[j] - beta_[i];
      if (beta_[i] > hi_[j] + kPrimalTol) infeas = beta_[i] - hi_[j];
      if (infeas == 0.0) continue;
      const double score = infeas * infeas / std::max(weight_[i], 1e-12);
      if (score > worst) {
        worst = score;
        r = i;
      }
    }
    if (r < 0) {
      if (cost_ == true_cost_) return Status::kOptimal;
      // Optimal only for shifted costs. Drop the shifts; recomputing the duals puts
      // boxed columns back on their dual-feasible side and the loop repairs
      // the primal side. Columns with one infinite bound keep a shift.
      if (++unshift_rounds >= kMaxUnshiftRounds) return Status::kOptimal;
      cost_ = true_cost_;
      recompute_duals_and_values();
      for (int j = 0; j < ntot_; ++j) {
        if (row_of_[j] >= 0 || lo_[j] == hi_[j]) continue;
        if (at_upper_[j] ? d_[j] > kDualTol : d_[j] < -kDualTol) {
          cost_[j] -= d_[j];
          d_[j] = 0.0;
        }
      }
      continue;
    }

    const int leaving = basis_[r];
    const bool increase = beta_[r] < lo_[leaving];
    const double target = increase ? lo_[leaving] : hi_[leaving];

    for (int i = 0; i < m_; ++i) rho_[i] = binv(r, i);
    // Harris two-pass ratio test.
    double bound = kInf;
    for (int j = 0; j < ntot_; ++j) {
      alpha_row_[j] = 0.0;
      if (row_of_[j] >= 0) continue;
      const double a = row_dot(rho_, j);
      alpha_row_[j] = a;
      if (lo_[j] == hi_[j]) continue;
      const bool ok = increase ? (at_upper_[j] ? a > kPivotTol : a < -kPivotTol)
                               : (at_upper_[j] ? a < -kPivotTol : a > kPivotTol);
      if (!ok) continue;
      bound = std::min(bound, (std::abs(d_[j]) + kDualTol) / std::abs(a));
    }
    if (bound == kInf) {
      // Only trust the certificate when it comes from a fresh factorization.
      if (since_refactor_ == 0) return Status::kInfeasible;
      refactor();
      continue;
    }
    int q = -1;
    double best_alpha = 0.0;
    for (int j = 0; j < ntot_; ++j) {
      if (row_of_[j] >= 0 || lo_[j] == hi_[j]) continue;
      const double a = alpha_row_[j];
      const bool ok = increase ? (at_upper_[j] ? a > kPivotTol : a < -kPivotTol)
                               : (at_upper_[j] ? a < -kPivotTol : a > kPivotTol);
      if (!ok) continue;
      if (std::abs(d_[j]) / std::abs(a) <= bound && std::abs(a) > best_alpha) {
        best_alpha = std::abs(a);
        q = j;
      }
    }

    ftran(q, alpha_col_);
    const double alpha = alpha_col_[r];
    if (std::abs(alpha) < kPivotTol) {
      // Row and column disagree: the inverse has drifted.
      refactor();
      continue;
    }
    const double step = (beta_[r] - target) / alpha;
    const double entering_value = nonbasic_value(q) + step;
    for (int i = 0; i < m_; ++i) {
      if (i != r) beta_[i] -= alpha_col_[i] * step;
    }
    beta_[r] = entering_value;

    // Harris may pick a column whose reduced cost drifted to the wrong side;
    // shift its cost so the dual step is zero rather than backwards.
    if (at_upper_[q] ? d_[q] > 0.0 : d_[q] < 0.0) {
      cost_[q] -= d_[q];
      d_[q] = 0.0;
    }
    const double theta = d_[q] / alpha;
    if (theta != 0.0) {
      for (int j = 0; j < ntot_; ++j) {
        if (row_of_[j] < 0) d_[j] -= theta * alpha_row_[j];
      }
    }
    d_[q] = 0.0;
    d_[leaving] = -theta;

    // Rank-one update of the explicit inverse; the steepest-edge weights are
    // recomputed exactly on the way.
    std::fill(weight_.begin(), weight_.end(), 0.0);
    for (int k = 0; k < m_; ++k) {
      double* col = &binv_[static_cast<std::size_t>(k) * m_];
      const double piv = col[r] / alpha;
      if (piv != 0.0) {
        for (int i = 0; i < m_; ++i) col[i] -= alpha_col_[i] * piv;
        col[r] = piv;
      }
      for (int i = 0; i < m_; ++i) weight_[i] += col[i] * col[i];
    }

    basis_[r] = q;
    row_of_[q] = r;
    row_of_[leaving] = -1;
    at_upper_[leaving] = !increase;
    ++iterations_;
    ++since_refactor_;
  }
  return Status::kIterationLimit;
}

void DualSimplex::set_bounds(int j, double lo, double hi) {
  if (row_of_[j] >= 0) {
    lo_[j] = lo;
    hi_[j] = hi;
    return;
  }
  const double old = nonbasic_value(j);
  lo_[j] = lo;
  hi_[j] = hi;
  if (std::isfinite(lo) && std::isfinite(hi) && lo != hi) {
    // A column released from a fixing may sit on the wrong side for its reduced cost.
    at_upper_[j] = d_[j] < 0.0;
  }
  if (at_upper_[j] && !std::isfinite(hi)) at_upper_[j] = 0;
  if (!at_upper_[j] && !std::isfinite(lo)) at_upper_[j] = 1;
  const double delta = nonbasic_value(j) - old;
  if (delta == 0.0) return;
  ftran(j, alpha_col_);
  for (int i = 0; i < m_; ++i) beta_[i] -= alpha_col_[i] * delta;
}

double DualSimplex::value(int j) const {
  return row_of_[j] >= 0 ? beta_[row_of_[j]] : nonbasic_value(j);
}

double DualSimplex::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) {
    if (true_cost_[j] != 0.0) z += true_cost_[j] * value(j);
  }
  return z;
}

namespace {

// Open node of the search: one bound change on top of its parent's.
struct Node {
  std::shared_ptr<const Node> parent;
  int var = -1;
  double lo = 0.0;
  double hi = 0.0;
  double bound = -kInf;  // parent LP objective
  std::int64_t seq = 0;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<const Node>& a, const std::shared_ptr<const Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->seq > b->seq;
  }
};

}  // namespace

MilpResult solve_milp(const MilpProblem& problem, const MilpOptions& options) {
  DualSimplex lp(problem.cost, problem.lo, problem.hi, problem.rows);
  const int n = lp.num_structural();
  MilpResult result;
  double best = options.incumbent_objective;
  bool budget_hit = false;
  bool found = false;

  auto pruned = [&](double obj) {
    if (options.integral_objective) return std::ceil(obj - kIntTol) >= best - 0.5;
    return obj >= best - 1e-9;
  };

  // Bounds currently loaded into the LP that differ from the root ones.
  std::vector<int> touched;
  std::vector<char> mark(n, 0);
  std::vector<double> want_lo(problem.lo), want_hi(problem.hi);
  auto load = [&](const std::shared_ptr<const Node>& node) {
    std::vector<int> cand = touched;
    for (int j : touched) {
      want_lo[j] = problem.lo[j];
      want_hi[j] = problem.hi[j];
    }
    std::vector<const Node*> chain;
    for (const Node* p = node.get(); p; p = p->parent.get()) chain.push_back(p);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      want_lo[(*it)->var] = (*it)->lo;
      want_hi[(*it)->var] = (*it)->hi;
      cand.push_back((*it)->var);
    }
    touched.clear();
    for (int j : cand) {
      if (mark[j]) continue;
      mark[j] = 1;
      if (lp.lower(j) != want_lo[j] || lp.upper(j) != want_hi[j]) lp.set_bounds(j, want_lo[j], want_hi[j]);
      if (want_lo[j] != problem.lo[j] || want_hi[j] != problem.hi[j]) touched.push_back(j);
    }
    for (int j : cand) mark[j] = 0;
  };

  std::priority_queue<std::shared_ptr<const Node>, std::vector<std::shared_ptr<const Node>>, NodeOrder> open;
  std::int64_t seq = 0;
  std::shared_ptr<const Node> current;  // nullptr is the root
  bool have_node = true;
  double current_bound = -kInf;

  auto next_open = [&]() {
    while (!open.empty()) {
      auto node = open.top();
      open.pop();
      if (!pruned(node->bound)) {
        current = std::move(node);
        current_bound = current->bound;
        return true;
      }
    }
    return false;
  };

  while (have_node) {
    if (result.nodes >= options.node_budget) {
      budget_hit = true;
      break;
    }
    ++result.nodes;
    load(current);
    const auto status = lp.solve();
    if (status == DualSimplex::Status::kIterationLimit) {
      // An unfinished LP proves nothing about the subtree.
      budget_hit = true;
      break;
    }
    const double obj = status == DualSimplex::Status::kOptimal ? lp.objective() : kInf;
    if (result.nodes == 1) result.root_bound = obj;
    if (status != DualSimplex::Status::kOptimal || pruned(obj)) {
      have_node = next_open();
      continue;
    }

    if (options.heuristic) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) x[j] = lp.value(j);
      if (auto sol = options.heuristic(x)) {
        double z = 0.0;
        for (int j = 0; j < n; ++j) z += problem.cost[j] * (*sol)[j];
        if (z < best - 1e-9) {
          result.x = std::move(*sol);
          result.objective = z;
          best = z;
          found = true;
          if (options.stop_at_first_feasible) break;
          if (pruned(obj)) {
            have_node = next_open();
            continue;
          }
        }
      }
    }

    int branch = -1;
    double most = kIntTol;
    for (int j = 0; j < n; ++j) {
      if (!problem.integer[j]) continue;
      const double v = lp.value(j);
      const double frac = std::abs(v - std::round(v));
      if (frac > most + 1e-12) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      result.x.resize(n);
      double z = 0.0;
      for (int j = 0; j < n; ++j) {
        const double v = lp.value(j);
        result.x[j] = problem.integer[j] ? std::round(v) : v;
        z += problem.cost[j] * result.x[j];
      }
      result.objective = z;
      best = z;
      found = true;
      if (options.stop_at_first_feasible) break;
      have_node = next_open();
      continue;
    }

    // Plunge into the up branch; the down branch waits in the queue.
    const double v = lp.value(branch);
    auto down = std::make_shared<Node>();
    down->parent = current;
    down->var = branch;
    down->lo = lp.lower(branch);
    down->hi = std::floor(v);
    down->bound = obj;
    down->seq = seq++;
    auto up = std::make_shared<Node>();
    up->parent = current;
    up->var = branch;
    up->lo = std::ceil(v);
    up->hi = lp.upper(branch);
    up->bound = obj;
    up->seq = seq++;
    open.push(std::move(down));
    current = std::move(up);
    current_bound = obj;
  }

  result.lp_iterations = lp.iterations();
  if (budget_hit) {
    result.status = MilpStatus::kBudgetExhausted;
    double lowest = std::min(current_bound, best);
    if (!open.empty()) lowest = std::min(lowest, open.top()->bound);
    result.open_bound = lowest;
  } else if (found) {
    result.status = options.stop_at_first_feasible ? MilpStatus::kFeasible : MilpStatus::kOptimal;
  } else {
    result.status = MilpStatus::kInfeasible;
  }
  return result;
}

}  // namespace netfec
