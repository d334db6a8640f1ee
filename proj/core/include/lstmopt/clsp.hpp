#pragma once

// Data model of the single-item capacitated lot-sizing problem (CLSP):
//
//   min  sum_t p_t x_t + f_t y_t + h_t s_t
//   s.t. s_{t-1} + x_t - d_t = s_t
//        x_t <= cap_t y_t
//        x_t, s_t >= 0,  y_t in {0,1}
//
// Periods are 1-based in every public interface (FixPlan keys, violation
// reports, cut indices). Vectors are stored 0-based: element t-1 holds
// period t.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lstmopt {

inline constexpr double kFeasibilityTol = 1e-6;

struct InstanceMeta {
  int c_ratio = 0;
  double f_ratio = 0.0;
  std::uint64_t seed = 0;
};

struct Instance {
  std::vector<long> demand;
  std::vector<double> prod_cost;
  std::vector<double> setup_cost;
  std::vector<double> hold_cost;
  std::vector<long> capacity;
  long initial_inventory = 0;
  InstanceMeta meta;

  std::size_t horizon() const noexcept { return demand.size(); }

  // Throws DimensionError on mismatched lengths, T = 0 or negative entries.
  void validate() const;

  long total_demand() const noexcept;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit };

std::string to_string(SolveStatus status);
SolveStatus parse_status(const std::string& text);

struct SolveStats {
  double wall_time_seconds = 0.0;
  std::uint64_t nodes_explored = 0;
  std::uint64_t lp_solves = 0;
  std::optional<double> mip_gap;
  std::uint64_t cuts_added = 0;
};

struct Solution {
  std::vector<double> x;
  std::vector<double> s;
  std::vector<int> y;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  SolveStats stats;

  bool has_values() const noexcept {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible ||
           (status == SolveStatus::TimeLimit && !y.empty());
  }
};

// Fixed setup decisions, keyed by 1-based period.
class FixPlan {
 public:
  FixPlan() = default;

  // Throws DimensionError when period is outside [1, horizon] or value is not
  // 0/1. Re-fixing a period overwrites its value.
  void fix(std::size_t period, int value, std::size_t horizon);
  void erase(std::size_t period) { entries_.erase(period); }

  std::optional<int> value(std::size_t period) const;
  bool contains(std::size_t period) const { return entries_.count(period) != 0; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const std::map<std::size_t, int>& entries() const noexcept { return entries_; }

  // True when every entry of this plan is also in `other` with the same value.
  bool subset_of(const FixPlan& other) const;

  bool operator==(const FixPlan&) const = default;

 private:
  std::map<std::size_t, int> entries_;
};

double objective_value(const Instance& inst, std::span<const double> x,
                       std::span<const double> y, std::span<const double> s);
double objective_value(const Instance& inst, const Solution& sol);

struct Violation {
  enum class Kind { Dimension, FlowBalance, Capacity, Negative, NonBinary, Objective };
  Kind kind;
  std::size_t period;  // 1-based; 0 for instance-wide violations
  double amount;
  std::string describe() const;
};

std::vector<Violation> check_solution(const Instance& inst, const Solution& sol,
                                      double tol = kFeasibilityTol);

// Exact feasibility of the CLSP under a set of fixings: inventory is unbounded,
// so the problem is feasible iff cumulative available capacity covers
// cumulative demand at every prefix.
bool flow_feasible(const Instance& inst, const FixPlan& plan);

// Same test on a full 0/1 setup vector.
bool flow_feasible(const Instance& inst, std::span<const int> setups);

}  // namespace lstmopt
