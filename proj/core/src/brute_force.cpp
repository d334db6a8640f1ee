#include <chrono>
#include <limits>

#include "lstmopt/errors.hpp"
#include "lstmopt/solvers.hpp"

namespace lstmopt {

namespace {

// Min-cost flow on the production network of a fixed setup pattern:
// source -> t (cap U_t, cost p_t), t -> t+1 (uncapacitated, cost h_t),
// t -> sink (cap = residual demand of t). Successive shortest paths with
// Bellman-Ford, since residual arcs carry negative costs.
class ProductionFlow {
 public:
  explicit ProductionFlow(std::size_t periods)
      : periods_(periods), source_(periods), sink_(periods + 1), adj_(periods + 2) {}

  std::size_t add_arc(std::size_t from, std::size_t to, double cap, double cost) {
    const std::size_t id = arcs_.size();
    arcs_.push_back({to, cap, cost});
    adj_[from].push_back(id);
    arcs_.push_back({from, 0.0, -cost});
    adj_[to].push_back(id + 1);
    return id;
  }

  std::size_t source() const { return source_; }
  std::size_t sink() const { return sink_; }
  double flow_on(std::size_t arc) const { return arcs_[arc ^ 1].cap; }

  // Pushes `amount` units; returns false if the network cannot carry them.
  bool push(double amount) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const std::size_t nodes = adj_.size();
    std::size_t guard = 0;
    while (amount > 1e-9) {
      if (++guard > 64 * nodes * nodes + 64) throw ResourceError("brute_force: flow did not converge");
      std::vector<double> dist(nodes, kInf);
      std::vector<std::size_t> via(nodes, static_cast<std::size_t>(-1));
      dist[source_] = 0.0;
      for (std::size_t round = 0; round + 1 < nodes; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < nodes; ++u) {
          if (dist[u] == kInf) continue;
          for (std::size_t id : adj_[u]) {
            const Arc& a = arcs_[id];
            if (a.cap <= 1e-12) continue;
            const double nd = dist[u] + a.cost;
            if (nd < dist[a.to] - 1e-12) {
              dist[a.to] = nd;
              via[a.to] = id;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (dist[sink_] == kInf) return false;
      double bottleneck = amount;
      for (std::size_t v = sink_; v != source_; v = arcs_[via[v] ^ 1].to) {
        bottleneck = std::min(bottleneck, arcs_[via[v]].cap);
      }
      for (std::size_t v = sink_; v != source_; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].cap -= bottleneck;
        arcs_[via[v] ^ 1].cap += bottleneck;
      }
      amount -= bottleneck;
    }
    return true;
  }

 private:
  struct Arc {
    std::size_t to;
    double cap;
    double cost;
  };
  std::size_t periods_;
  std::size_t source_;
  std::size_t sink_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
};

// Optimal production for a fixed pattern. Initial inventory is consumed
// first-in-first-out, which is optimal because every unit of it pays the same
// holding cost per period as produced units do.
std::optional<Solution> solve_pattern(const Instance& inst, const std::vector<int>& y) {
  const std::size_t n = inst.horizon();
  std::vector<double> residual(n);
  long stock = inst.initial_inventory;
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const long used = std::min(stock, inst.demand[t]);
    stock -= used;
    residual[t] = static_cast<double>(inst.demand[t] - used);
    total += residual[t];
  }
  ProductionFlow net(n);
  std::vector<std::size_t> production_arc(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double cap = y[t] ? static_cast<double>(inst.capacity[t]) : 0.0;
    production_arc[t] = net.add_arc(net.source(), t, cap, inst.prod_cost[t]);
    if (t + 1 < n) {
      net.add_arc(t, t + 1, std::numeric_limits<double>::infinity(), inst.hold_cost[t]);
    }
    net.add_arc(t, net.sink(), residual[t], 0.0);
  }
  if (!net.push(total)) return std::nullopt;
  Solution sol;
  sol.x.resize(n);
  sol.s.resize(n);
  sol.y = y;
  double inventory = static_cast<double>(inst.initial_inventory);
  for (std::size_t t = 0; t < n; ++t) {
    sol.x[t] = net.flow_on(production_arc[t]);
    inventory += sol.x[t] - static_cast<double>(inst.demand[t]);
    sol.s[t] = std::max(inventory, 0.0);
  }
  sol.objective = objective_value(inst, sol);
  return sol;
}

}  // namespace

Solution brute_force(const Instance& inst) {
  inst.validate();
  const std::size_t n = inst.horizon();
  if (n > kMaxBruteForceHorizon) {
    throw ResourceError("brute_force: T=" + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxBruteForceHorizon));
  }
  const auto start = std::chrono::steady_clock::now();
  Solution best;
  best.status = SolveStatus::Infeasible;
  bool found = false;
  std::vector<int> y(n);
  std::uint64_t patterns = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t t = 0; t < n; ++t) y[t] = static_cast<int>((mask >> t) & 1U);
    if (!flow_feasible(inst, y)) continue;
    ++patterns;
    auto sol = solve_pattern(inst, y);
    if (!sol) continue;
    if (!found || sol->objective < best.objective - 1e-12) {
      best = std::move(*sol);
      found = true;
    }
  }
  if (found) {
    best.status = SolveStatus::Optimal;
    best.stats.mip_gap = 0.0;
  }
  best.stats.nodes_explored = patterns;
  best.stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return best;
}

}  // namespace lstmopt
