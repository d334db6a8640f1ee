#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lstmopt/bilstm.hpp"
#include "lstmopt/clsp.hpp"
#include "lstmopt/generator.hpp"
#include "lstmopt/solvers.hpp"

namespace lstmopt {

struct PredictionVector {
  std::vector<double> probs;
  std::string source;
  double seconds = 0.0;  // time spent producing probs; counted into time_ml
};

// Throws ValidationError on a length mismatch or any entry that is NaN or
// outside [0, 1].
void validate_prediction(const PredictionVector& pred, std::size_t horizon);

// round_half_up(level * T / 100).
std::size_t fixed_count(double level_pct, std::size_t horizon);

// Fixes the k most confident periods (confidence max(p, 1-p), ties by
// ascending period) to their thresholded labels. Plans are nested in level.
FixPlan select_predictions(std::span<const double> probs, double level_pct);

enum class EvalMode { Plain, HardFix, SoftFix, WarmStart };
std::string to_string(EvalMode mode);
EvalMode parse_mode(const std::string& text);  // plain | hard | soft | warm

struct EvalRecord {
  std::string instance_id;
  int c_ratio = 0;
  double f_ratio = 0.0;
  std::size_t horizon = 0;
  EvalMode mode = EvalMode::Plain;
  double level_pct = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  double z_star = 0.0;                // plain-solve objective (incumbent on a time limit)
  std::optional<double> z_tilde;      // absent when no solution was found
  double time_plain = 0.0;
  double time_ml = 0.0;               // includes prediction time
  std::size_t k_fixed = 0;
  std::optional<double> optgap_pct;   // absent when infeasible or z_star == 0
  std::size_t nodes = 0;
  std::optional<double> incumbent;    // warm start only
};

Solution solve_plain(const Instance& inst, const BnbOptions& opts = {});

EvalRecord solve_with_hard_fix(const Instance& inst, const PredictionVector& pred,
                               double level_pct, const Solution& plain,
                               const BnbOptions& opts = {});

// Starts from the full plan and drops zero-fixes, least confident first,
// until the plan is flow feasible.
FixPlan soft_fix_plan(const Instance& inst, std::span<const double> probs);
EvalRecord solve_with_soft_fix(const Instance& inst, const PredictionVector& pred,
                               const Solution& plain, const BnbOptions& opts = {});

// Thresholded prediction made flow feasible by opening, at each deficit
// period t, the closed period in [1, t] with the highest probability.
std::vector<int> repair_prediction(const Instance& inst, std::span<const double> probs);
EvalRecord solve_with_warm_start(const Instance& inst, const PredictionVector& pred,
                                 const Solution& plain, const BnbOptions& opts = {});

using Predictor = std::function<std::vector<double>(const Instance&)>;

// Splits inst into consecutive chunk_T-period sub-instances (s0 = 0 each),
// predicts every chunk and concatenates. Throws PartitionError unless
// chunk_T divides the horizon.
Instance slice_instance(const Instance& inst, std::size_t first, std::size_t count);
PredictionVector concat_predictions(const Predictor& predictor, const Instance& inst_long,
                                    std::size_t chunk_T, std::string source = "concat");
PredictionVector concat_predictions(const BiLstmModel& model, const Instance& inst_long,
                                    std::size_t chunk_T);

// ---- metrics ----

double time_improvement(double time_cpx, double time_ml);
double time_gain_pct(double time_cpx, double time_ml);
double infeasibility_pct(std::size_t infeasible, std::size_t total);
std::optional<double> optimality_gap_pct(double z_tilde, double z_star);

struct MetricsReport {
  std::size_t m = 0;
  std::size_t m_hat = 0;
  double inf_pct = 0.0;
  double time_cpx = 0.0;  // mean plain time over all records
  // Means over records that produced a solution.
  std::optional<double> time_ml;
  std::optional<double> timeimp;
  std::optional<double> timegain_pct;
  std::optional<double> optgap_pct;
};

// A record counts as infeasible when it has no solution.
MetricsReport compute_metrics(std::span<const EvalRecord> records);

struct GroupKey {
  int c_ratio;
  double f_ratio;
  std::size_t horizon;
  EvalMode mode;
  double level_pct;
  auto operator<=>(const GroupKey&) const = default;
};
std::map<GroupKey, MetricsReport> aggregate(std::span<const EvalRecord> records);

// ---- batch evaluation ----

struct EvalRequest {
  std::vector<double> levels{0, 25, 50, 75, 85, 90, 95, 100};
  std::vector<EvalMode> modes{EvalMode::HardFix, EvalMode::SoftFix, EvalMode::WarmStart};
  BnbOptions bnb;
  std::size_t jobs = 1;
};

// One plain solve per instance, then one record per (mode, level); soft and
// warm modes are level-independent and yield a single record at 100. Output
// order is instance-major, independent of jobs.
std::vector<EvalRecord> evaluate(std::span<const LabeledInstance> items,
                                 std::span<const PredictionVector> preds,
                                 const EvalRequest& request);

}  // namespace lstmopt
