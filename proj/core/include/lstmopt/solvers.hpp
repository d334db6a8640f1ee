#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lstmopt/clsp.hpp"
#include "lstmopt/simplex.hpp"

namespace lstmopt {

// LP relaxation of the CLSP: y_t relaxed to [0, 1].
struct LpSolution {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> s;
  double objective = 0.0;
  LpStatus status = LpStatus::Infeasible;
};

// (l,S) inequality  sum_{t in S} x_t <= sum_{t in S} d_{tl} y_t + s_l,
// with d_{tl} = d_t + ... + d_l. Periods are 1-based.
struct LsCut {
  std::size_t ell = 0;
  std::vector<std::size_t> set_S;
  std::vector<double> demand_to_ell;  // d_{tl}, parallel to set_S

  // lhs - rhs at the given point (positive means violated).
  double violation(std::span<const double> x, std::span<const double> y,
                   std::span<const double> s) const;
};

LsCut make_ls_cut(const Instance& inst, std::size_t ell, std::vector<std::size_t> set_S);

LpSolution solve_lp(const Instance& inst, const FixPlan& plan,
                    const std::vector<LsCut>& extra_cuts = {});

// Same relaxation with explicit per-period bounds on y (branch-and-bound nodes).
LpSolution solve_lp_bounds(const Instance& inst, std::span<const double> y_lower,
                           std::span<const double> y_upper, const std::vector<LsCut>& cuts);

// Cost of a complete setup pattern: the LP with every y_t fixed.
Solution evaluate_setups(const Instance& inst, std::span<const int> setups);

struct BnbOptions {
  double time_limit_seconds = kInfinity;
  double gap_tol = 1e-9;
  // Cuts enforced at every node.
  std::vector<LsCut> cuts;
  // Setup vector evaluated up front and used as the initial incumbent.
  std::optional<std::vector<int>> initial_incumbent;
};

// Best-bound branch-and-bound on the most fractional setup variable.
Solution branch_and_bound(const Instance& inst, const FixPlan& plan, const BnbOptions& opts = {});

inline constexpr std::size_t kDefaultDpStateBudget = 200'000'000;

// Forward DP over (period, ending inventory); exact for integer demand and
// capacity. Throws ResourceError when T * (D_T + 1) exceeds state_budget.
Solution solve_dp(const Instance& inst, std::size_t state_budget = kDefaultDpStateBudget);

inline constexpr std::size_t kMaxBruteForceHorizon = 20;

// Enumerates all 2^T setup patterns and solves each pattern's transportation
// problem with a min-cost-flow routine independent of the simplex.
Solution brute_force(const Instance& inst);

inline constexpr double kSeparationTol = 1e-6;

// Most-violated (l,S) inequality for each l, where violated by more than tol.
std::vector<LsCut> separate_ls_cuts(const Instance& inst, const LpSolution& lp,
                                    double tol = kSeparationTol);

struct RootCutLoop {
  std::vector<LsCut> cuts;
  std::vector<double> bounds;  // root LP objective before round 1, then after each round
  LpSolution final_lp;
};

// Solve root LP, separate, add violated cuts; repeated up to `rounds` times
// or until no cut is violated.
RootCutLoop ls_cut_rounds(const Instance& inst, int rounds, double tol = kSeparationTol);

// Root separation loop followed by branch-and-bound with the cut pool.
Solution solve_with_ls_cuts(const Instance& inst, int rounds = 5, const BnbOptions& opts = {});

// 100 * (mip - lp) / mip. Throws UndefinedGapError when mip is zero.
double compute_igap(double mip_objective, double lp_objective);

}  // namespace lstmopt
