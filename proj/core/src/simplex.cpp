#include "lstmopt/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "lstmopt/errors.hpp"

namespace lstmopt {

std::size_t LpProblem::add_column(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return cost.size() - 1;
}

namespace {

class Tableau {
 public:
  Tableau(const LpProblem& lp, const SimplexOptions& opt) : opt_(opt) {
    const std::size_t n = lp.num_columns();
    m_ = lp.rows.size();
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(lp.lower[j])) {
        throw DimensionError("simplex: column lower bounds must be finite");
      }
    }
    std::size_t slacks = 0;
    for (const auto& r : lp.rows) slacks += r.sense != RowSense::Equal;
    structural_ = n;
    artificial_begin_ = n + slacks;
    cols_ = artificial_begin_ + m_;

    tab_.assign(m_ * cols_, 0.0);
    lower_.assign(cols_, 0.0);
    upper_.assign(cols_, kInfinity);
    cost_.assign(cols_, 0.0);
    value_.assign(cols_, 0.0);
    basic_row_.assign(cols_, kNonBasic);
    basis_.assign(m_, 0);
    rhs_.assign(m_, 0.0);

    for (std::size_t j = 0; j < n; ++j) {
      lower_[j] = lp.lower[j];
      upper_[j] = lp.upper[j];
      cost_[j] = lp.cost[j];
      value_[j] = lower_[j];
    }
    std::size_t slack = n;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      for (const auto& [j, a] : row.coeffs) at(i, j) += a;
      if (row.sense == RowSense::LessEqual) at(i, slack++) = 1.0;
      if (row.sense == RowSense::GreaterEqual) at(i, slack++) = -1.0;
      rhs_[i] = row.rhs;
    }
    // Artificial basis: a_i = |b_i - A z_N| with sign absorbed into the row.
    for (std::size_t i = 0; i < m_; ++i) {
      double residual = rhs_[i];
      for (std::size_t j = 0; j < artificial_begin_; ++j) residual -= at(i, j) * value_[j];
      if (residual < 0) {
        for (std::size_t j = 0; j < artificial_begin_; ++j) at(i, j) = -at(i, j);
        residual = -residual;
      }
      const std::size_t a = artificial_begin_ + i;
      at(i, a) = 1.0;
      basis_[i] = a;
      basic_row_[a] = i;
      value_[a] = residual;
    }
  }

  LpResult run() {
    LpResult result;
    const std::size_t limit =
        opt_.max_iterations ? opt_.max_iterations : 50 * (m_ + cols_) + 1000;

    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase_cost(cols_, 0.0);
    for (std::size_t a = artificial_begin_; a < cols_; ++a) phase_cost[a] = 1.0;
    if (!optimize(phase_cost, limit, result.iterations)) {
      result.status = LpStatus::IterationLimit;
      return result;
    }
    double infeasibility = 0.0;
    for (std::size_t a = artificial_begin_; a < cols_; ++a) infeasibility += value_[a];
    double scale = 1.0;
    for (double b : rhs_) scale = std::max(scale, std::abs(b));
    if (infeasibility > opt_.feasibility_tol * scale * std::max<std::size_t>(1, m_)) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    for (std::size_t a = artificial_begin_; a < cols_; ++a) {
      upper_[a] = 0.0;
      if (basic_row_[a] == kNonBasic) value_[a] = 0.0;
    }

    // Phase 2.
    bool unbounded = false;
    if (!optimize(cost_, limit, result.iterations, &unbounded)) {
      result.status = unbounded ? LpStatus::Unbounded : LpStatus::IterationLimit;
      return result;
    }
    result.status = LpStatus::Optimal;
    result.values.assign(value_.begin(), value_.begin() + static_cast<long>(structural_));
    result.objective = 0.0;
    for (std::size_t j = 0; j < structural_; ++j) result.objective += cost_[j] * value_[j];
    return result;
  }

 private:
  static constexpr std::size_t kNonBasic = static_cast<std::size_t>(-1);

  double& at(std::size_t i, std::size_t j) { return tab_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return tab_[i * cols_ + j]; }

  // Returns false on iteration limit or (phase 2) unboundedness.
  bool optimize(const std::vector<double>& cost, std::size_t limit, std::size_t& iterations,
                bool* unbounded = nullptr) {
    std::vector<double> reduced(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
      double r = cost[j];
      if (basic_row_[j] == kNonBasic) {
        for (std::size_t i = 0; i < m_; ++i) r -= cost[basis_[i]] * at(i, j);
      } else {
        r = 0.0;
      }
      reduced[j] = r;
    }
    std::size_t degenerate_run = 0;
    while (true) {
      if (iterations >= limit) return false;
      const bool bland = degenerate_run >= opt_.degenerate_switch;

      // Pricing.
      std::size_t entering = kNonBasic;
      double best = 0.0;
      double direction = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (basic_row_[j] != kNonBasic) continue;
        if (upper_[j] - lower_[j] <= 0.0) continue;
        const double d = reduced[j];
        double dir = 0.0;
        if (d < -opt_.optimality_tol && value_[j] < upper_[j]) dir = 1.0;
        else if (d > opt_.optimality_tol && value_[j] > lower_[j]) dir = -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          direction = dir;
        }
      }
      if (entering == kNonBasic) return true;

      // Ratio test.
      double theta = upper_[entering] - lower_[entering];
      std::size_t leave_row = kNonBasic;
      double leave_alpha = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = direction * at(i, entering);
        if (std::abs(alpha) <= opt_.pivot_tol) continue;
        const std::size_t b = basis_[i];
        double limit_i;
        if (alpha > 0) {
          limit_i = (value_[b] - lower_[b]) / alpha;
        } else {
          if (!std::isfinite(upper_[b])) continue;
          limit_i = (upper_[b] - value_[b]) / (-alpha);
        }
        limit_i = std::max(limit_i, 0.0);
        bool take;
        if (leave_row == kNonBasic) {
          take = limit_i < theta;
        } else if (limit_i < theta - 1e-12) {
          take = true;
        } else if (limit_i <= theta + 1e-12) {
          take = bland ? basis_[i] < basis_[leave_row]
                       : std::abs(alpha) > std::abs(leave_alpha);
        } else {
          take = false;
        }
        if (take) {
          theta = std::min(theta, limit_i);
          leave_row = i;
          leave_alpha = alpha;
        }
      }
      if (!std::isfinite(theta)) {
        if (unbounded) *unbounded = true;
        return false;
      }
      ++iterations;
      degenerate_run = theta <= opt_.feasibility_tol ? degenerate_run + 1 : 0;

      // Move basic variables along the edge.
      for (std::size_t i = 0; i < m_; ++i) {
        value_[basis_[i]] -= direction * theta * at(i, entering);
      }
      value_[entering] += direction * theta;

      if (leave_row == kNonBasic) {
        // Bound flip of the entering column.
        value_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
        continue;
      }

      const std::size_t leaving = basis_[leave_row];
      value_[leaving] = leave_alpha > 0 ? lower_[leaving] : upper_[leaving];
      pivot(leave_row, entering, reduced);
      basic_row_[leaving] = kNonBasic;
      basic_row_[entering] = leave_row;
      basis_[leave_row] = entering;
    }
  }

  void pivot(std::size_t r, std::size_t q, std::vector<double>& reduced) {
    double* prow = &tab_[r * cols_];
    const double inv = 1.0 / prow[q];
    for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[i * cols_];
      const double factor = row[q];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) row[j] -= factor * prow[j];
      row[q] = 0.0;
    }
    const double factor = reduced[q];
    if (factor != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) reduced[j] -= factor * prow[j];
      reduced[q] = 0.0;
    }
  }

  const SimplexOptions& opt_;
  std::size_t m_ = 0;
  std::size_t cols_ = 0;
  std::size_t structural_ = 0;
  std::size_t artificial_begin_ = 0;
  std::vector<double> tab_;
  std::vector<double> lower_, upper_, cost_, value_, rhs_;
  std::vector<std::size_t> basic_row_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_simplex(const LpProblem& problem, const SimplexOptions& options) {
  const std::size_t n = problem.num_columns();
  if (problem.lower.size() != n || problem.upper.size() != n) {
    throw DimensionError("simplex: bound vectors do not match column count");
  }
  for (const auto& row : problem.rows) {
    for (const auto& [j, a] : row.coeffs) {
      if (j >= n) throw DimensionError("simplex: row references unknown column");
      (void)a;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (problem.lower[j] > problem.upper[j]) {
      LpResult r;
      r.status = LpStatus::Infeasible;
      return r;
    }
  }
  Tableau tableau(problem, options);
  return tableau.run();
}

}  // namespace lstmopt
