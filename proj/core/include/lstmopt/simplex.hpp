#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace lstmopt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LpRow {
  std::vector<std::pair<std::size_t, double>> coeffs;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

// min c'z  s.t. rows, lower <= z <= upper. Every column needs a finite lower
// bound; upper bounds may be infinite.
struct LpProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  std::size_t add_column(double c, double lo, double hi);
  void add_row(LpRow row) { rows.push_back(std::move(row)); }
  std::size_t num_columns() const noexcept { return cost.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-10;
  std::size_t max_iterations = 0;  // 0 selects a size-dependent limit
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  std::size_t degenerate_switch = 30;
};

// Two-phase bounded-variable primal simplex on a dense tableau.
LpResult solve_simplex(const LpProblem& problem, const SimplexOptions& options = {});

}  // namespace lstmopt
