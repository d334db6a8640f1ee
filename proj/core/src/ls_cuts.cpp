#include <chrono>

#include "lstmopt/errors.hpp"
#include "lstmopt/solvers.hpp"

namespace lstmopt {

std::vector<LsCut> separate_ls_cuts(const Instance& inst, const LpSolution& lp, double tol) {
  if (lp.status != LpStatus::Optimal) {
    throw UsageError("separate_ls_cuts: LP solution is not optimal");
  }
  const std::size_t n = inst.horizon();
  std::vector<LsCut> cuts;
  for (std::size_t ell = 1; ell <= n; ++ell) {
    // d_{tl} for t = l down to 1, accumulated backwards.
    std::vector<double> d_to_ell(ell);
    double acc = 0.0;
    for (std::size_t t = ell; t >= 1; --t) {
      acc += static_cast<double>(inst.demand[t - 1]);
      d_to_ell[t - 1] = acc;
    }
    LsCut cut;
    cut.ell = ell;
    double excess = 0.0;
    for (std::size_t t = 1; t <= ell; ++t) {
      const double gain = lp.x[t - 1] - d_to_ell[t - 1] * lp.y[t - 1];
      if (gain > 0.0) {
        cut.set_S.push_back(t);
        cut.demand_to_ell.push_back(d_to_ell[t - 1]);
        excess += gain;
      }
    }
    if (!cut.set_S.empty() && excess > lp.s[ell - 1] + tol) cuts.push_back(std::move(cut));
  }
  return cuts;
}

RootCutLoop ls_cut_rounds(const Instance& inst, int rounds, double tol) {
  if (rounds < 1) throw UsageError("ls_cut_rounds: rounds must be at least 1");
  RootCutLoop loop;
  const FixPlan none;
  loop.final_lp = solve_lp(inst, none, {});
  if (loop.final_lp.status != LpStatus::Optimal) return loop;
  loop.bounds.push_back(loop.final_lp.objective);
  for (int r = 0; r < rounds; ++r) {
    auto found = separate_ls_cuts(inst, loop.final_lp, tol);
    if (found.empty()) break;
    for (auto& c : found) loop.cuts.push_back(std::move(c));
    loop.final_lp = solve_lp(inst, none, loop.cuts);
    if (loop.final_lp.status != LpStatus::Optimal) {
      throw ResourceError("ls_cut_rounds: valid cuts made the root LP infeasible");
    }
    loop.bounds.push_back(loop.final_lp.objective);
  }
  return loop;
}

Solution solve_with_ls_cuts(const Instance& inst, int rounds, const BnbOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  RootCutLoop loop = ls_cut_rounds(inst, rounds);
  const std::size_t separated = loop.cuts.size();
  BnbOptions with_cuts = opts;
  for (auto& c : loop.cuts) with_cuts.cuts.push_back(std::move(c));
  Solution sol = branch_and_bound(inst, FixPlan{}, with_cuts);
  sol.stats.lp_solves += loop.bounds.size();
  sol.stats.cuts_added = separated;
  sol.stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace lstmopt
