#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lstmopt/pipeline.hpp"
#include "lstmopt/trainer.hpp"

namespace lstmopt {

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

// Columns: instance_id, c_ratio, f_ratio, T, mode, level_pct, status, z_star,
// z_tilde, time_plain_s, time_ml_s, k_fixed, optgap_pct. Missing values are
// empty fields.
inline constexpr const char* kResultsHeader =
    "instance_id,c_ratio,f_ratio,T,mode,level_pct,status,z_star,z_tilde,time_plain_s,"
    "time_ml_s,k_fixed,optgap_pct";
void write_results_csv(std::ostream& out, std::span<const EvalRecord> records);
std::vector<EvalRecord> read_results_csv(std::istream& in);

struct SolveRow {
  std::string instance_id;
  std::size_t horizon = 0;
  std::string solver;
  Solution solution;
};
inline constexpr const char* kSolveHeader =
    "instance_id,T,solver,status,objective,time_s,nodes,lp_solves,cuts_added,mip_gap";
void write_solve_csv(std::ostream& out, std::span<const SolveRow> rows);

void write_history_csv(std::ostream& out, std::span<const EpochRecord> history);

// One JSON object per line: {"instance_id": ..., "probs": [...]} with an
// optional "predict_seconds".
struct ProbRecord {
  std::string instance_id;
  PredictionVector pred;
};
void write_probabilities(std::ostream& out, std::span<const ProbRecord> records,
                         bool include_seconds = false);
std::vector<ProbRecord> read_probabilities(std::istream& in);

// Markdown tables, one per (c, f, T) group, rows per mode and level.
std::string render_report(const std::map<GroupKey, MetricsReport>& groups);

// Hard-fix metric versus level: columns c_ratio, f_ratio, T, level_pct, value.
enum class FigureMetric { OptGap, Infeasibility, TimeImprovement };
std::string render_figure_csv(const std::map<GroupKey, MetricsReport>& groups,
                              FigureMetric metric);

}  // namespace lstmopt
