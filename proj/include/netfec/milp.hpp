#pragma once

// Small MILP machinery: a bounded-variable dual simplex and a best-first
// branch-and-bound on top of it. Sized for the planning ILPs here (a few
// hundred rows, a few thousand columns).

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace netfec {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SparseRow {
  std::vector<int> idx;
  std::vector<double> val;
  double rhs;  // row reads  sum val * x <= rhs
};

// minimize c'x  s.t.  A x <= b,  lo <= x <= hi.
// Revised dual simplex with an explicit dense basis inverse; A is kept
// column-wise sparse. The starting basis is all slacks with each structural
// at the bound its cost prefers, so every variable with a negative cost needs
// a finite upper bound and every other one a finite lower bound.
class DualSimplex {
 public:
  enum class Status { kOptimal, kInfeasible, kIterationLimit };

  DualSimplex(std::vector<double> cost, std::vector<double> lo, std::vector<double> hi,
              const std::vector<SparseRow>& rows);

  Status solve(std::int64_t max_iterations = 200000);

  void set_bounds(int j, double lo, double hi);
  double lower(int j) const { return lo_[j]; }
  double upper(int j) const { return hi_[j]; }
  double value(int j) const;
  double objective() const;
  int num_structural() const noexcept { return n_; }
  std::int64_t iterations() const noexcept { return iterations_; }

 private:
  struct Entry {
    int row;
    double val;
  };

  double& binv(int i, int k) { return binv_[static_cast<std::size_t>(k) * m_ + i]; }  // column-major
  double binv(int i, int k) const { return binv_[static_cast<std::size_t>(k) * m_ + i]; }
  double nonbasic_value(int j) const { return at_upper_[j] ? hi_[j] : lo_[j]; }
  // B^{-1} a_j into out (size m).
  void ftran(int j, std::vector<double>& out) const;
  double row_dot(const std::vector<double>& rho, int j) const;
  void refactor();
  void recompute_duals_and_values();

  int n_;     // structural columns
  int m_;     // rows
  int ntot_;  // n_ + m_
  std::vector<std::vector<Entry>> cols_;  // structural columns of A
  std::vector<double> b_;
  std::vector<double> cost_;       // may carry small shifts from the ratio test
  std::vector<double> true_cost_;  // as given, for objective()
  std::vector<double> lo_, hi_;
  std::vector<double> binv_;
  std::vector<double> beta_;  // basic values, by row
  std::vector<double> weight_;  // squared norms of the rows of B^{-1}
  std::vector<double> d_;     // reduced costs
  std::vector<int> basis_;    // column basic in each row
  std::vector<int> row_of_;   // row of a basic column, -1 otherwise
  std::vector<char> at_upper_;
  std::vector<double> rho_, alpha_row_, alpha_col_;
  std::int64_t iterations_ = 0;
  int since_refactor_ = 0;
};

struct MilpProblem {
  std::vector<double> cost, lo, hi;
  std::vector<char> integer;
  std::vector<SparseRow> rows;
};

struct MilpOptions {
  std::int64_t node_budget = 1000000;
  bool stop_at_first_feasible = false;
  // With integral objective coefficients on integer columns only, nodes whose
  // rounded-up LP bound cannot beat the incumbent are pruned.
  bool integral_objective = false;
  double incumbent_objective = kInf;
  // Called with the LP point of every node that survives pruning. A returned
  // vector must be an integer-feasible point; it is taken as the incumbent if
  // it improves on the current one.
  std::function<std::optional<std::vector<double>>(const std::vector<double>&)> heuristic;
};

enum class MilpStatus { kOptimal, kFeasible, kInfeasible, kBudgetExhausted };

struct MilpResult {
  MilpStatus status = MilpStatus::kInfeasible;
  std::vector<double> x;  // best integer point (empty if none found)
  double objective = kInf;
  double root_bound = -kInf;
  double open_bound = -kInf;  // lowest bound still open when the budget ran out
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
};

// Branch and bound on the most fractional variable (lowest index on ties).
// The search plunges into the up branch and, at a dead end, resumes from the
// open node with the lowest parent bound. Deterministic.
MilpResult solve_milp(const MilpProblem& problem, const MilpOptions& options);

}  // namespace netfec
