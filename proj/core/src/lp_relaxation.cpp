#include <algorithm>
#include <cmath>

#include "lstmopt/errors.hpp"
#include "lstmopt/solvers.hpp"

namespace lstmopt {

double LsCut::violation(std::span<const double> x, std::span<const double> y,
                        std::span<const double> s) const {
  double lhs = 0.0;
  double rhs = s[ell - 1];
  for (std::size_t k = 0; k < set_S.size(); ++k) {
    const std::size_t t = set_S[k] - 1;
    lhs += x[t];
    rhs += demand_to_ell[k] * y[t];
  }
  return lhs - rhs;
}

LsCut make_ls_cut(const Instance& inst, std::size_t ell, std::vector<std::size_t> set_S) {
  if (ell < 1 || ell > inst.horizon()) throw DimensionError("(l,S) cut: l outside [1,T]");
  if (set_S.empty()) throw DimensionError("(l,S) cut: S must be non-empty");
  std::sort(set_S.begin(), set_S.end());
  set_S.erase(std::unique(set_S.begin(), set_S.end()), set_S.end());
  if (set_S.front() < 1 || set_S.back() > ell) {
    throw DimensionError("(l,S) cut: S must be a subset of {1..l}");
  }
  LsCut cut;
  cut.ell = ell;
  cut.demand_to_ell.reserve(set_S.size());
  for (std::size_t t : set_S) {
    double d = 0.0;
    for (std::size_t u = t; u <= ell; ++u) d += static_cast<double>(inst.demand[u - 1]);
    cut.demand_to_ell.push_back(d);
  }
  cut.set_S = std::move(set_S);
  return cut;
}

LpSolution solve_lp_bounds(const Instance& inst, std::span<const double> y_lower,
                           std::span<const double> y_upper, const std::vector<LsCut>& cuts) {
  const std::size_t n = inst.horizon();
  if (y_lower.size() != n || y_upper.size() != n) {
    throw DimensionError("solve_lp: bound vectors must have length T");
  }
  // Columns: x_1..x_T, s_1..s_T, y_1..y_T.
  LpProblem lp;
  for (std::size_t t = 0; t < n; ++t) {
    lp.add_column(inst.prod_cost[t], 0.0, static_cast<double>(inst.capacity[t]));
  }
  for (std::size_t t = 0; t < n; ++t) lp.add_column(inst.hold_cost[t], 0.0, kInfinity);
  for (std::size_t t = 0; t < n; ++t) lp.add_column(inst.setup_cost[t], y_lower[t], y_upper[t]);
  const auto xcol = [](std::size_t t) { return t; };
  const auto scol = [n](std::size_t t) { return n + t; };
  const auto ycol = [n](std::size_t t) { return 2 * n + t; };

  for (std::size_t t = 0; t < n; ++t) {
    LpRow flow;
    flow.sense = RowSense::Equal;
    flow.coeffs = {{xcol(t), 1.0}, {scol(t), -1.0}};
    double rhs = static_cast<double>(inst.demand[t]);
    if (t > 0) flow.coeffs.emplace_back(scol(t - 1), 1.0);
    else rhs -= static_cast<double>(inst.initial_inventory);
    flow.rhs = rhs;
    lp.add_row(std::move(flow));
  }
  for (std::size_t t = 0; t < n; ++t) {
    LpRow link;
    link.sense = RowSense::LessEqual;
    link.coeffs = {{xcol(t), 1.0}, {ycol(t), -static_cast<double>(inst.capacity[t])}};
    link.rhs = 0.0;
    lp.add_row(std::move(link));
  }
  for (const LsCut& cut : cuts) {
    if (cut.ell < 1 || cut.ell > n) throw DimensionError("solve_lp: cut index outside [1,T]");
    LpRow row;
    row.sense = RowSense::LessEqual;
    for (std::size_t k = 0; k < cut.set_S.size(); ++k) {
      const std::size_t t = cut.set_S[k] - 1;
      row.coeffs.emplace_back(xcol(t), 1.0);
      row.coeffs.emplace_back(ycol(t), -cut.demand_to_ell[k]);
    }
    row.coeffs.emplace_back(scol(cut.ell - 1), -1.0);
    row.rhs = 0.0;
    lp.add_row(std::move(row));
  }

  const LpResult res = solve_simplex(lp);
  LpSolution out;
  out.status = res.status;
  if (res.status == LpStatus::IterationLimit) {
    throw ResourceError("solve_lp: simplex iteration limit reached");
  }
  if (res.status != LpStatus::Optimal) return out;
  out.x.assign(res.values.begin(), res.values.begin() + static_cast<long>(n));
  out.s.assign(res.values.begin() + static_cast<long>(n),
               res.values.begin() + static_cast<long>(2 * n));
  out.y.assign(res.values.begin() + static_cast<long>(2 * n), res.values.end());
  // Snap round-off so downstream checks see exact bounds.
  for (auto* v : {&out.x, &out.s}) {
    for (double& e : *v) {
      if (std::abs(e) < 1e-11) e = 0.0;
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    out.y[t] = std::clamp(out.y[t], y_lower[t], y_upper[t]);
  }
  out.objective = res.objective;
  return out;
}

LpSolution solve_lp(const Instance& inst, const FixPlan& plan,
                    const std::vector<LsCut>& extra_cuts) {
  inst.validate();
  const std::size_t n = inst.horizon();
  std::vector<double> lo(n, 0.0), hi(n, 1.0);
  for (const auto& [period, value] : plan.entries()) {
    if (period < 1 || period > n) throw DimensionError("solve_lp: plan index outside [1,T]");
    lo[period - 1] = hi[period - 1] = static_cast<double>(value);
  }
  return solve_lp_bounds(inst, lo, hi, extra_cuts);
}

Solution evaluate_setups(const Instance& inst, std::span<const int> setups) {
  const std::size_t n = inst.horizon();
  if (setups.size() != n) throw DimensionError("evaluate_setups: length mismatch");
  std::vector<double> fixed(n);
  for (std::size_t t = 0; t < n; ++t) fixed[t] = setups[t] ? 1.0 : 0.0;
  const LpSolution lp = solve_lp_bounds(inst, fixed, fixed, {});
  Solution sol;
  if (lp.status != LpStatus::Optimal) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  sol.x = lp.x;
  sol.s = lp.s;
  sol.y.assign(setups.begin(), setups.end());
  sol.objective = objective_value(inst, sol);
  sol.status = SolveStatus::Feasible;
  sol.stats.lp_solves = 1;
  return sol;
}

double compute_igap(double mip_objective, double lp_objective) {
  if (mip_objective == 0.0) throw UndefinedGapError("IGap undefined for a zero MIP objective");
  return 100.0 * (mip_objective - lp_objective) / mip_objective;
}

}  // namespace lstmopt
