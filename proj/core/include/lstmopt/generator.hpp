#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lstmopt/clsp.hpp"

namespace lstmopt {

struct IntRange {
  long lo = 0;
  long hi = 0;
};

// Distributional scheme for random CLSP instances. Capacities are drawn
// around c_ratio times the mean demand and setup costs around f_ratio times
// the mean holding cost (which is 1, since h_t = 1).
struct GenParams {
  int c_ratio = 3;
  double f_ratio = 1000.0;
  std::size_t horizon = 90;
  IntRange demand{1, 600};
  IntRange prod_cost{1, 5};
  std::uint64_t seed = 0;

  void validate() const;
};

// Ranges used for the large experiments: d_t in [1,600].
GenParams large_preset(int c_ratio, double f_ratio, std::size_t horizon, std::uint64_t seed);
// Workstation-sized variant: d_t in [1,60].
GenParams desk_preset(int c_ratio, double f_ratio, std::size_t horizon, std::uint64_t seed);

inline constexpr int kMaxRedraws = 1000;

long round_half_up(double v) noexcept;

// Deterministic in (params.seed, draw_index). Infeasible draws are discarded
// and the whole instance is redrawn; throws GenerationError after
// kMaxRedraws attempts.
Instance generate_instance(const GenParams& params, std::uint64_t draw_index);

struct LabeledInstance {
  std::string id;
  Instance instance;
  Solution solution;
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;

  std::size_t total() const noexcept { return train + validation + test; }

  // 64% / 16% / 20% by draw order; the test split absorbs rounding.
  static SplitCounts standard(std::size_t n) noexcept;
};

struct Dataset {
  GenParams params;
  std::string solver;
  std::vector<LabeledInstance> train;
  std::vector<LabeledInstance> validation;
  std::vector<LabeledInstance> test;

  std::size_t size() const noexcept { return train.size() + validation.size() + test.size(); }
};

using Oracle = std::function<Solution(const Instance&)>;

inline constexpr std::size_t kMinDatasetSize = 10;

// Draws n feasible instances and labels each with the oracle's optimum.
// Throws UsageError for n < 10 and DatasetError when the oracle does not
// return an optimal solution.
Dataset generate_dataset(const GenParams& params, std::size_t n, const Oracle& oracle,
                         std::string solver_name = "dp", std::size_t jobs = 1,
                         std::optional<SplitCounts> split = std::nullopt);

// Directory layout: meta.json, train.jsonl, val.jsonl, test.jsonl. Each line
// is {"instance": ..., "solution": ...}. Solve times are written only when
// record_times is set so that regenerated datasets are byte-identical.
void write_dataset(const std::filesystem::path& dir, const Dataset& data,
                   bool record_times = false);
Dataset read_dataset(const std::filesystem::path& dir);

std::string gen_params_to_json(const GenParams& params);

}  // namespace lstmopt
