#pragma once

#include <vector>

#include "lstmopt/clsp.hpp"
#include "lstmopt/random.hpp"

namespace lstmopt::testing {

// T=3, d=(2,3,1), cap=(4,4,4), p=(1,1,1), f=(5,5,5), h=(1,1,1).
inline Instance e1() {
  Instance inst;
  inst.demand = {2, 3, 1};
  inst.capacity = {4, 4, 4};
  inst.prod_cost = {1, 1, 1};
  inst.setup_cost = {5, 5, 5};
  inst.hold_cost = {1, 1, 1};
  return inst;
}

// T=1, d=5, cap=10, p=1, f=2, h=1.
inline Instance single_period() {
  Instance inst;
  inst.demand = {5};
  inst.capacity = {10};
  inst.prod_cost = {1};
  inst.setup_cost = {2};
  inst.hold_cost = {1};
  return inst;
}

// Small random instance with integer data; capacities scaled to mean demand
// by `ratio` so most draws are feasible but some are not.
inline Instance random_small(CounterRng& rng, std::size_t horizon, long max_demand, double ratio) {
  Instance inst;
  inst.demand.resize(horizon);
  for (auto& d : inst.demand) d = rng.uniform_int(0, max_demand);
  double mean = 0.0;
  for (long d : inst.demand) mean += static_cast<double>(d);
  mean /= static_cast<double>(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    inst.capacity.push_back(rng.uniform_int(static_cast<long>(0.5 * ratio * mean),
                                            static_cast<long>(1.1 * ratio * mean) + 1));
    inst.prod_cost.push_back(static_cast<double>(rng.uniform_int(1, 5)));
    inst.setup_cost.push_back(static_cast<double>(rng.uniform_int(5, 40)));
    inst.hold_cost.push_back(static_cast<double>(rng.uniform_int(1, 2)));
  }
  return inst;
}

inline bool near_rel(double a, double b, double rel) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= rel * scale;
}

}  // namespace lstmopt::testing
