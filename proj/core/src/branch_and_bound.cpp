#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "lstmopt/errors.hpp"
#include "lstmopt/solvers.hpp"

namespace lstmopt {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kIntegralityTol = 1e-9;

struct Node {
  double bound;
  std::uint64_t id;
  std::vector<double> y_lower;
  std::vector<double> y_upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Solution branch_and_bound(const Instance& inst, const FixPlan& plan, const BnbOptions& opts) {
  inst.validate();
  if (!(opts.gap_tol >= 0)) throw UsageError("gap_tol must be non-negative");
  const auto start = Clock::now();
  const std::size_t n = inst.horizon();

  Solution best;
  best.status = SolveStatus::Infeasible;
  bool have_incumbent = false;
  SolveStats stats;

  auto offer = [&](std::vector<double> x, std::vector<double> s, std::vector<int> y) {
    Solution cand;
    cand.x = std::move(x);
    cand.s = std::move(s);
    cand.y = std::move(y);
    cand.objective = objective_value(inst, cand);
    if (!have_incumbent || cand.objective < best.objective) {
      cand.status = SolveStatus::Feasible;
      best = std::move(cand);
      have_incumbent = true;
    }
  };

  Node root;
  root.bound = -kInfinity;
  root.id = 0;
  root.y_lower.assign(n, 0.0);
  root.y_upper.assign(n, 1.0);
  for (const auto& [period, value] : plan.entries()) {
    if (period < 1 || period > n) throw DimensionError("branch_and_bound: plan index outside [1,T]");
    root.y_lower[period - 1] = root.y_upper[period - 1] = value;
  }

  if (opts.initial_incumbent) {
    const auto& y0 = *opts.initial_incumbent;
    if (y0.size() != n) throw DimensionError("initial incumbent length mismatch");
    bool respects_plan = true;
    for (std::size_t t = 0; t < n; ++t) {
      respects_plan = respects_plan && y0[t] >= root.y_lower[t] && y0[t] <= root.y_upper[t];
    }
    if (respects_plan && flow_feasible(inst, y0)) {
      Solution start_sol = evaluate_setups(inst, y0);
      ++stats.lp_solves;
      if (start_sol.status == SolveStatus::Feasible) {
        offer(std::move(start_sol.x), std::move(start_sol.s), std::move(start_sol.y));
      }
    }
  }

  auto prune_threshold = [&]() {
    if (!have_incumbent) return kInfinity;
    const double slack = std::max(opts.gap_tol * std::abs(best.objective),
                                  1e-9 * std::max(1.0, std::abs(best.objective)));
    return best.objective - slack;
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(std::move(root));
  std::uint64_t next_id = 1;
  bool timed_out = false;

  while (!open.empty()) {
    if (open.top().bound >= prune_threshold()) break;
    if (seconds_since(start) > opts.time_limit_seconds) {
      timed_out = true;
      break;
    }
    Node node = open.top();
    open.pop();
    ++stats.nodes_explored;

    const LpSolution lp = solve_lp_bounds(inst, node.y_lower, node.y_upper, opts.cuts);
    ++stats.lp_solves;
    if (lp.status != LpStatus::Optimal) continue;
    if (lp.objective >= prune_threshold()) continue;

    std::size_t branch = n;
    double most_fractional = kIntegralityTol;
    std::vector<int> rounded(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double frac = std::min(lp.y[t], 1.0 - lp.y[t]);
      if (frac > most_fractional) {
        most_fractional = frac;
        branch = t;
      }
      rounded[t] = lp.y[t] > kIntegralityTol ? 1 : 0;
    }
    // Rounding every positive setup up keeps (x, s) feasible.
    offer(lp.x, lp.s, rounded);
    if (branch == n) continue;
    if (lp.objective >= prune_threshold()) continue;

    Node down = node;
    down.bound = lp.objective;
    down.id = next_id++;
    down.y_upper[branch] = 0.0;
    Node up = std::move(node);
    up.bound = lp.objective;
    up.id = next_id++;
    up.y_lower[branch] = 1.0;
    open.push(std::move(down));
    open.push(std::move(up));
  }

  stats.wall_time_seconds = seconds_since(start);
  if (timed_out) {
    const double lower = open.empty() ? best.objective : open.top().bound;
    if (have_incumbent) {
      const double denom = std::max(std::abs(best.objective), 1e-12);
      stats.mip_gap = std::max(0.0, (best.objective - lower) / denom);
    }
    best.status = SolveStatus::TimeLimit;
  } else if (have_incumbent) {
    // Closed either by exhausting the tree or by the gap tolerance.
    const double lower = open.empty() ? best.objective : std::min(open.top().bound, best.objective);
    const double denom = std::max(std::abs(best.objective), 1e-12);
    const double gap = std::max(0.0, (best.objective - lower) / denom);
    if (gap <= 1e-9) {
      best.status = SolveStatus::Optimal;
      stats.mip_gap = 0.0;
    } else {
      best.status = SolveStatus::Feasible;
      stats.mip_gap = gap;
    }
  } else {
    best.status = SolveStatus::Infeasible;
  }
  stats.cuts_added = opts.cuts.size();
  best.stats = stats;
  return best;
}

}  // namespace lstmopt
