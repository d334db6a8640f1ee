#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

#include "lstmopt/errors.hpp"
#include "lstmopt/solvers.hpp"

namespace lstmopt {

// State s = ending inventory of period t. For production x > 0 the
// predecessor inventory s_prev ranges over a window [s + d - cap, s + d - 1]
// whose ends both advance with s, so the best predecessor is the minimum of
// dp(s_prev) - p * s_prev over a sliding window (monotone deque).
Solution solve_dp(const Instance& inst, std::size_t state_budget) {
  inst.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = inst.horizon();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // hi[t]: largest useful ending inventory after period t (hi[0] = s0).
  std::vector<long> hi(n + 1);
  {
    long remaining = inst.total_demand();
    long consumed = 0;
    hi[0] = inst.initial_inventory;
    for (std::size_t t = 1; t <= n; ++t) {
      remaining -= inst.demand[t - 1];
      consumed += inst.demand[t - 1];
      hi[t] = std::max(remaining, inst.initial_inventory - consumed);
    }
  }
  std::size_t states = 0;
  for (std::size_t t = 1; t <= n; ++t) states += static_cast<std::size_t>(hi[t]) + 1;
  if (states > state_budget) {
    throw ResourceError("solve_dp: " + std::to_string(states) +
                        " states exceed budget " + std::to_string(state_budget));
  }

  // pred[t][s]: predecessor inventory chosen for state s after period t.
  std::vector<std::vector<long>> pred(n + 1);
  std::vector<double> prev(static_cast<std::size_t>(hi[0]) + 1, kInf);
  prev[static_cast<std::size_t>(hi[0])] = 0.0;

  for (std::size_t t = 1; t <= n; ++t) {
    const long d = inst.demand[t - 1];
    const long cap = inst.capacity[t - 1];
    const double p = inst.prod_cost[t - 1];
    const double f = inst.setup_cost[t - 1];
    const double h = inst.hold_cost[t - 1];
    const long prev_hi = hi[t - 1];
    std::vector<double> cur(static_cast<std::size_t>(hi[t]) + 1, kInf);
    auto& choice = pred[t];
    choice.assign(cur.size(), -1);

    auto key = [&](long sp) { return prev[static_cast<std::size_t>(sp)] - p * static_cast<double>(sp); };
    std::deque<long> window;
    long pushed = -1;  // largest s_prev inserted into the window so far
    for (long s = 0; s <= hi[t]; ++s) {
      const long win_hi = std::min(s + d - 1, prev_hi);
      const long win_lo = std::max(s + d - cap, 0L);
      for (long sp = std::max(pushed + 1, 0L); sp <= win_hi; ++sp) {
        if (prev[static_cast<std::size_t>(sp)] < kInf) {
          const double k = key(sp);
          while (!window.empty() && key(window.back()) >= k) window.pop_back();
          window.push_back(sp);
        }
        pushed = sp;
      }
      while (!window.empty() && window.front() < win_lo) window.pop_front();

      double best = kInf;
      long best_prev = -1;
      const long idle_prev = s + d;
      if (idle_prev <= prev_hi && prev[static_cast<std::size_t>(idle_prev)] < kInf) {
        best = prev[static_cast<std::size_t>(idle_prev)];
        best_prev = idle_prev;
      }
      if (cap > 0 && !window.empty() && win_lo <= win_hi) {
        const long sp = window.front();
        const double v = key(sp) + p * static_cast<double>(s + d) + f;
        if (v < best) {
          best = v;
          best_prev = sp;
        }
      }
      if (best_prev >= 0) {
        cur[static_cast<std::size_t>(s)] = best + h * static_cast<double>(s);
        choice[static_cast<std::size_t>(s)] = best_prev;
      }
    }
    prev = std::move(cur);
  }

  Solution sol;
  sol.stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  long end_state = -1;
  double best = kInf;
  for (long s = 0; s <= hi[n]; ++s) {
    if (prev[static_cast<std::size_t>(s)] < best) {
      best = prev[static_cast<std::size_t>(s)];
      end_state = s;
    }
  }
  if (end_state < 0) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  sol.x.assign(n, 0.0);
  sol.s.assign(n, 0.0);
  sol.y.assign(n, 0);
  long s = end_state;
  for (std::size_t t = n; t >= 1; --t) {
    const long sp = pred[t][static_cast<std::size_t>(s)];
    const long x = s + inst.demand[t - 1] - sp;
    sol.s[t - 1] = static_cast<double>(s);
    sol.x[t - 1] = static_cast<double>(x);
    sol.y[t - 1] = x > 0 ? 1 : 0;
    s = sp;
  }
  sol.objective = objective_value(inst, sol);
  sol.status = SolveStatus::Optimal;
  sol.stats.mip_gap = 0.0;
  sol.stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace lstmopt
