#include "lstmopt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "lstmopt/errors.hpp"
#include "lstmopt/parallel.hpp"

namespace lstmopt {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double confidence(double p) { return std::max(p, 1.0 - p); }

// Periods (0-based) by descending confidence, ties by ascending index.
std::vector<std::size_t> confidence_order(std::span<const double> probs) {
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return confidence(probs[a]) > confidence(probs[b]);
  });
  return order;
}

EvalRecord base_record(const Instance& inst, EvalMode mode, double level, const Solution& plain) {
  EvalRecord r;
  r.c_ratio = inst.meta.c_ratio;
  r.f_ratio = inst.meta.f_ratio;
  r.horizon = inst.horizon();
  r.mode = mode;
  r.level_pct = level;
  r.z_star = plain.has_values() ? plain.objective : std::nan("");
  r.time_plain = plain.stats.wall_time_seconds;
  return r;
}

void fill_outcome(EvalRecord& r, const Solution& sol) {
  r.status = sol.status;
  r.nodes = sol.stats.nodes_explored;
  if (sol.has_values()) {
    r.z_tilde = sol.objective;
    if (std::isfinite(r.z_star)) r.optgap_pct = optimality_gap_pct(sol.objective, r.z_star);
  }
}

}  // namespace

void validate_prediction(const PredictionVector& pred, std::size_t horizon) {
  if (pred.probs.size() != horizon) {
    throw ValidationError("prediction has " + std::to_string(pred.probs.size()) +
                          " entries for a horizon of " + std::to_string(horizon));
  }
  for (std::size_t t = 0; t < pred.probs.size(); ++t) {
    const double p = pred.probs[t];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("prediction entry for period " + std::to_string(t + 1) +
                            " is not a probability");
    }
  }
}

std::size_t fixed_count(double level_pct, std::size_t horizon) {
  if (!(level_pct >= 0.0 && level_pct <= 100.0)) throw UsageError("level must lie in [0, 100]");
  const long k = round_half_up(level_pct * static_cast<double>(horizon) / 100.0);
  return std::min<std::size_t>(static_cast<std::size_t>(k), horizon);
}

FixPlan select_predictions(std::span<const double> probs, double level_pct) {
  const std::size_t k = fixed_count(level_pct, probs.size());
  const auto order = confidence_order(probs);
  FixPlan plan;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t t = order[i];
    plan.fix(t + 1, threshold_label(probs[t]), probs.size());
  }
  return plan;
}

std::string to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::Plain: return "plain";
    case EvalMode::HardFix: return "hard";
    case EvalMode::SoftFix: return "soft";
    case EvalMode::WarmStart: return "warm";
  }
  return "?";
}

EvalMode parse_mode(const std::string& text) {
  if (text == "plain") return EvalMode::Plain;
  if (text == "hard") return EvalMode::HardFix;
  if (text == "soft") return EvalMode::SoftFix;
  if (text == "warm") return EvalMode::WarmStart;
  throw UsageError("unknown mode '" + text + "' (expected plain, hard, soft or warm)");
}

Solution solve_plain(const Instance& inst, const BnbOptions& opts) {
  return branch_and_bound(inst, FixPlan{}, opts);
}

EvalRecord solve_with_hard_fix(const Instance& inst, const PredictionVector& pred,
                               double level_pct, const Solution& plain, const BnbOptions& opts) {
  validate_prediction(pred, inst.horizon());
  const auto start = Clock::now();
  const FixPlan plan = select_predictions(pred.probs, level_pct);
  const Solution sol = branch_and_bound(inst, plan, opts);
  EvalRecord r = base_record(inst, EvalMode::HardFix, level_pct, plain);
  r.time_ml = pred.seconds + seconds_since(start);
  r.k_fixed = plan.size();
  fill_outcome(r, sol);
  return r;
}

FixPlan soft_fix_plan(const Instance& inst, std::span<const double> probs) {
  FixPlan plan = select_predictions(probs, 100.0);
  const auto order = confidence_order(probs);
  // Least confident zero-fixes first: walk the selection order backwards.
  for (auto it = order.rbegin(); it != order.rend() && !flow_feasible(inst, plan); ++it) {
    if (plan.value(*it + 1) == 0) plan.erase(*it + 1);
  }
  return plan;
}

EvalRecord solve_with_soft_fix(const Instance& inst, const PredictionVector& pred,
                               const Solution& plain, const BnbOptions& opts) {
  validate_prediction(pred, inst.horizon());
  const auto start = Clock::now();
  const FixPlan plan = soft_fix_plan(inst, pred.probs);
  const Solution sol = branch_and_bound(inst, plan, opts);
  EvalRecord r = base_record(inst, EvalMode::SoftFix, 100.0, plain);
  r.time_ml = pred.seconds + seconds_since(start);
  r.k_fixed = plan.size();
  fill_outcome(r, sol);
  return r;
}

std::vector<int> repair_prediction(const Instance& inst, std::span<const double> probs) {
  const std::size_t n = inst.horizon();
  if (probs.size() != n) throw ValidationError("prediction length does not match horizon");
  std::vector<int> y(n);
  for (std::size_t t = 0; t < n; ++t) y[t] = threshold_label(probs[t]);
  double available = static_cast<double>(inst.initial_inventory);
  double demand = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    available += y[t] ? static_cast<double>(inst.capacity[t]) : 0.0;
    demand += static_cast<double>(inst.demand[t]);
    while (available < demand) {
      std::optional<std::size_t> pick;
      for (std::size_t u = 0; u <= t; ++u) {
        if (!y[u] && inst.capacity[u] > 0 && (!pick || probs[u] > probs[*pick])) pick = u;
      }
      if (!pick) throw ValidationError("instance is infeasible; no setup pattern covers demand");
      y[*pick] = 1;
      available += static_cast<double>(inst.capacity[*pick]);
    }
  }
  return y;
}

EvalRecord solve_with_warm_start(const Instance& inst, const PredictionVector& pred,
                                 const Solution& plain, const BnbOptions& opts) {
  validate_prediction(pred, inst.horizon());
  const auto start = Clock::now();
  BnbOptions warm = opts;
  warm.initial_incumbent = repair_prediction(inst, pred.probs);
  const Solution start_sol = evaluate_setups(inst, *warm.initial_incumbent);
  const Solution sol = branch_and_bound(inst, FixPlan{}, warm);
  EvalRecord r = base_record(inst, EvalMode::WarmStart, 100.0, plain);
  r.time_ml = pred.seconds + seconds_since(start);
  r.incumbent = start_sol.objective;
  fill_outcome(r, sol);
  return r;
}

Instance slice_instance(const Instance& inst, std::size_t first, std::size_t count) {
  if (first + count > inst.horizon()) throw PartitionError("slice exceeds horizon");
  auto cut = [&](const auto& v) {
    using V = std::decay_t<decltype(v)>;
    return V(v.begin() + static_cast<std::ptrdiff_t>(first),
             v.begin() + static_cast<std::ptrdiff_t>(first + count));
  };
  Instance out;
  out.demand = cut(inst.demand);
  out.prod_cost = cut(inst.prod_cost);
  out.setup_cost = cut(inst.setup_cost);
  out.hold_cost = cut(inst.hold_cost);
  out.capacity = cut(inst.capacity);
  out.initial_inventory = 0;
  out.meta = inst.meta;
  return out;
}

PredictionVector concat_predictions(const Predictor& predictor, const Instance& inst_long,
                                    std::size_t chunk_T, std::string source) {
  const std::size_t n = inst_long.horizon();
  if (chunk_T == 0 || n % chunk_T != 0) {
    throw PartitionError("horizon " + std::to_string(n) + " is not a multiple of chunk length " +
                         std::to_string(chunk_T));
  }
  const auto start = Clock::now();
  PredictionVector pred;
  pred.source = std::move(source);
  pred.probs.reserve(n);
  for (std::size_t first = 0; first < n; first += chunk_T) {
    const auto part = predictor(slice_instance(inst_long, first, chunk_T));
    if (part.size() != chunk_T) throw ValidationError("predictor returned a wrong-length chunk");
    pred.probs.insert(pred.probs.end(), part.begin(), part.end());
  }
  pred.seconds = seconds_since(start);
  return pred;
}

PredictionVector concat_predictions(const BiLstmModel& model, const Instance& inst_long,
                                    std::size_t chunk_T) {
  return concat_predictions([&](const Instance& i) { return predict_instance(model, i); },
                            inst_long, chunk_T, "bilstm");
}

double time_improvement(double time_cpx, double time_ml) {
  if (!(time_ml > 0)) throw UsageError("time_ml must be positive");
  return time_cpx / time_ml;
}

double time_gain_pct(double time_cpx, double time_ml) {
  if (!(time_cpx > 0)) throw UsageError("time_cpx must be positive");
  return 100.0 * (time_cpx - time_ml) / time_cpx;
}

double infeasibility_pct(std::size_t infeasible, std::size_t total) {
  if (total == 0) throw UsageError("no records");
  return 100.0 * static_cast<double>(infeasible) / static_cast<double>(total);
}

std::optional<double> optimality_gap_pct(double z_tilde, double z_star) {
  if (z_star == 0.0) return std::nullopt;
  return 100.0 * (z_tilde - z_star) / z_star;
}

MetricsReport compute_metrics(std::span<const EvalRecord> records) {
  if (records.empty()) throw UsageError("compute_metrics: empty record set");
  MetricsReport rep;
  rep.m = records.size();
  double plain_all = 0.0, plain_ok = 0.0, ml_ok = 0.0, gap_sum = 0.0;
  std::size_t ok = 0, gaps = 0;
  for (const auto& r : records) {
    plain_all += r.time_plain;
    if (!r.z_tilde) {
      ++rep.m_hat;
      continue;
    }
    ++ok;
    plain_ok += r.time_plain;
    ml_ok += r.time_ml;
    if (r.optgap_pct) {
      gap_sum += *r.optgap_pct;
      ++gaps;
    }
  }
  rep.inf_pct = infeasibility_pct(rep.m_hat, rep.m);
  rep.time_cpx = plain_all / static_cast<double>(rep.m);
  if (ok > 0) {
    const double cpx = plain_ok / static_cast<double>(ok);
    const double ml = ml_ok / static_cast<double>(ok);
    rep.time_ml = ml;
    if (ml > 0) rep.timeimp = time_improvement(cpx, ml);
    if (cpx > 0) rep.timegain_pct = time_gain_pct(cpx, ml);
  }
  if (gaps > 0) rep.optgap_pct = gap_sum / static_cast<double>(gaps);
  return rep;
}

std::map<GroupKey, MetricsReport> aggregate(std::span<const EvalRecord> records) {
  std::map<GroupKey, std::vector<EvalRecord>> groups;
  for (const auto& r : records) {
    groups[GroupKey{r.c_ratio, r.f_ratio, r.horizon, r.mode, r.level_pct}].push_back(r);
  }
  std::map<GroupKey, MetricsReport> out;
  for (const auto& [key, recs] : groups) out.emplace(key, compute_metrics(recs));
  return out;
}

std::vector<EvalRecord> evaluate(std::span<const LabeledInstance> items,
                                 std::span<const PredictionVector> preds,
                                 const EvalRequest& request) {
  if (items.size() != preds.size()) throw ValidationError("one prediction per instance required");
  for (std::size_t i = 0; i < items.size(); ++i) {
    validate_prediction(preds[i], items[i].instance.horizon());
  }
  for (double level : request.levels) fixed_count(level, 1);
  std::vector<std::vector<EvalRecord>> per(items.size());
  parallel_for(items.size(), request.jobs, [&](std::size_t i) {
    const Instance& inst = items[i].instance;
    const Solution plain = solve_plain(inst, request.bnb);
    auto& out = per[i];
    for (EvalMode mode : request.modes) {
      switch (mode) {
        case EvalMode::Plain: {
          EvalRecord r = base_record(inst, EvalMode::Plain, 0.0, plain);
          r.time_ml = plain.stats.wall_time_seconds;
          fill_outcome(r, plain);
          out.push_back(std::move(r));
          break;
        }
        case EvalMode::HardFix:
          for (double level : request.levels) {
            out.push_back(solve_with_hard_fix(inst, preds[i], level, plain, request.bnb));
          }
          break;
        case EvalMode::SoftFix:
          out.push_back(solve_with_soft_fix(inst, preds[i], plain, request.bnb));
          break;
        case EvalMode::WarmStart:
          out.push_back(solve_with_warm_start(inst, preds[i], plain, request.bnb));
          break;
      }
    }
    for (auto& r : out) r.instance_id = items[i].id;
  });
  std::vector<EvalRecord> records;
  for (auto& v : per) {
    for (auto& r : v) records.push_back(std::move(r));
  }
  return records;
}

}  // namespace lstmopt
