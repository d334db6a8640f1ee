#include "lstmopt/clsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lstmopt/errors.hpp"

namespace lstmopt {

namespace {

template <typename T>
void require_length(const std::vector<T>& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    std::ostringstream os;
    os << "instance field '" << name << "' has length " << v.size()
       << ", expected " << n;
    throw DimensionError(os.str());
  }
}

template <typename T>
void require_nonnegative(const std::vector<T>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0)) {
      std::ostringstream os;
      os << "instance field '" << name << "' is negative at period " << i + 1;
      throw DimensionError(os.str());
    }
  }
}

}  // namespace

void Instance::validate() const {
  const std::size_t n = demand.size();
  if (n == 0) throw DimensionError("instance horizon must be at least 1");
  require_length(prod_cost, n, "p");
  require_length(setup_cost, n, "f");
  require_length(hold_cost, n, "h");
  require_length(capacity, n, "cap");
  require_nonnegative(demand, "d");
  require_nonnegative(prod_cost, "p");
  require_nonnegative(setup_cost, "f");
  require_nonnegative(hold_cost, "h");
  require_nonnegative(capacity, "cap");
  if (initial_inventory < 0) throw DimensionError("initial inventory is negative");
}

long Instance::total_demand() const noexcept {
  return std::accumulate(demand.begin(), demand.end(), 0L);
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::TimeLimit: return "TimeLimit";
  }
  return "Unknown";
}

SolveStatus parse_status(const std::string& text) {
  if (text == "Optimal") return SolveStatus::Optimal;
  if (text == "Feasible") return SolveStatus::Feasible;
  if (text == "Infeasible") return SolveStatus::Infeasible;
  if (text == "TimeLimit") return SolveStatus::TimeLimit;
  throw FormatError("unknown solve status '" + text + "'");
}

void FixPlan::fix(std::size_t period, int value, std::size_t horizon) {
  if (period < 1 || period > horizon) {
    throw DimensionError("fix plan period " + std::to_string(period) +
                         " outside [1, " + std::to_string(horizon) + "]");
  }
  if (value != 0 && value != 1) {
    throw DimensionError("fix plan value must be 0 or 1");
  }
  entries_[period] = value;
}

std::optional<int> FixPlan::value(std::size_t period) const {
  auto it = entries_.find(period);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool FixPlan::subset_of(const FixPlan& other) const {
  return std::all_of(entries_.begin(), entries_.end(), [&](const auto& kv) {
    auto v = other.value(kv.first);
    return v && *v == kv.second;
  });
}

double objective_value(const Instance& inst, std::span<const double> x,
                       std::span<const double> y, std::span<const double> s) {
  const std::size_t n = inst.horizon();
  if (x.size() != n || y.size() != n || s.size() != n) {
    throw DimensionError("objective_value: vectors must have length T=" +
                         std::to_string(n));
  }
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    total += inst.prod_cost[t] * x[t] + inst.setup_cost[t] * y[t] +
             inst.hold_cost[t] * s[t];
  }
  return total;
}

double objective_value(const Instance& inst, const Solution& sol) {
  std::vector<double> y(sol.y.begin(), sol.y.end());
  return objective_value(inst, sol.x, y, sol.s);
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Dimension: os << "dimension"; break;
    case Kind::FlowBalance: os << "flow balance"; break;
    case Kind::Capacity: os << "capacity"; break;
    case Kind::Negative: os << "negativity"; break;
    case Kind::NonBinary: os << "non-binary setup"; break;
    case Kind::Objective: os << "objective mismatch"; break;
  }
  if (period > 0) os << " at t=" << period;
  os << " (" << amount << ")";
  return os.str();
}

std::vector<Violation> check_solution(const Instance& inst, const Solution& sol,
                                      double tol) {
  std::vector<Violation> out;
  const std::size_t n = inst.horizon();
  if (sol.x.size() != n || sol.s.size() != n || sol.y.size() != n) {
    out.push_back({Violation::Kind::Dimension, 0, 0.0});
    return out;
  }
  double prev = static_cast<double>(inst.initial_inventory);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t period = t + 1;
    const double balance = prev + sol.x[t] - static_cast<double>(inst.demand[t]) - sol.s[t];
    if (std::abs(balance) > tol) {
      out.push_back({Violation::Kind::FlowBalance, period, balance});
    }
    const double excess = sol.x[t] - sol.y[t] * static_cast<double>(inst.capacity[t]);
    if (excess > tol) out.push_back({Violation::Kind::Capacity, period, excess});
    if (sol.x[t] < -tol) out.push_back({Violation::Kind::Negative, period, sol.x[t]});
    if (sol.s[t] < -tol) out.push_back({Violation::Kind::Negative, period, sol.s[t]});
    if (sol.y[t] != 0 && sol.y[t] != 1) {
      out.push_back({Violation::Kind::NonBinary, period, static_cast<double>(sol.y[t])});
    }
    prev = sol.s[t];
  }
  const double obj = objective_value(inst, sol);
  const double diff = std::abs(obj - sol.objective);
  if (diff > tol * std::max(1.0, std::abs(obj))) {
    out.push_back({Violation::Kind::Objective, 0, sol.objective - obj});
  }
  return out;
}

bool flow_feasible(const Instance& inst, const FixPlan& plan) {
  const std::size_t n = inst.horizon();
  long available = inst.initial_inventory;
  long demanded = 0;
  for (std::size_t t = 0; t < n; ++t) {
    auto fixed = plan.value(t + 1);
    if (!fixed || *fixed == 1) available += inst.capacity[t];
    demanded += inst.demand[t];
    if (available < demanded) return false;
  }
  return true;
}

bool flow_feasible(const Instance& inst, std::span<const int> setups) {
  const std::size_t n = inst.horizon();
  if (setups.size() != n) throw DimensionError("flow_feasible: setup vector length mismatch");
  long available = inst.initial_inventory;
  long demanded = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (setups[t] != 0) available += inst.capacity[t];
    demanded += inst.demand[t];
    if (available < demanded) return false;
  }
  return true;
}

}  // namespace lstmopt
