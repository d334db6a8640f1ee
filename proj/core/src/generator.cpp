#include "lstmopt/generator.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "lstmopt/errors.hpp"
#include "lstmopt/instance_io.hpp"
#include "lstmopt/parallel.hpp"
#include "lstmopt/random.hpp"

namespace lstmopt {

namespace fs = std::filesystem;
using detail::json;

namespace {

enum FieldTag : std::uint64_t { kDemand = 1, kProdCost = 2, kCapacity = 3, kSetupCost = 4 };

constexpr int kDatasetFormatVersion = 1;

std::string split_id(const char* split, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%06zu", split, index);
  return buf;
}

}  // namespace

void GenParams::validate() const {
  if (c_ratio <= 0) throw UsageError("c_ratio must be positive");
  if (!(f_ratio > 0) || !std::isfinite(f_ratio)) throw UsageError("f_ratio must be positive");
  if (horizon == 0) throw UsageError("horizon T must be positive");
  if (demand.lo < 0 || demand.hi < demand.lo) throw UsageError("invalid demand range");
  if (prod_cost.lo < 0 || prod_cost.hi < prod_cost.lo) {
    throw UsageError("invalid production cost range");
  }
}

GenParams large_preset(int c_ratio, double f_ratio, std::size_t horizon, std::uint64_t seed) {
  GenParams p;
  p.c_ratio = c_ratio;
  p.f_ratio = f_ratio;
  p.horizon = horizon;
  p.seed = seed;
  return p;
}

GenParams desk_preset(int c_ratio, double f_ratio, std::size_t horizon, std::uint64_t seed) {
  GenParams p = large_preset(c_ratio, f_ratio, horizon, seed);
  p.demand = {1, 60};
  return p;
}

long round_half_up(double v) noexcept { return static_cast<long>(std::floor(v + 0.5)); }

Instance generate_instance(const GenParams& params, std::uint64_t draw_index) {
  params.validate();
  const std::size_t n = params.horizon;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    auto stream = [&](FieldTag tag) {
      return CounterRng({params.seed, draw_index, static_cast<std::uint64_t>(attempt), tag});
    };
    Instance inst;
    inst.meta = {params.c_ratio, params.f_ratio, params.seed};
    inst.demand.resize(n);
    inst.prod_cost.resize(n);
    inst.setup_cost.resize(n);
    inst.capacity.resize(n);
    inst.hold_cost.assign(n, 1.0);

    CounterRng demand_rng = stream(kDemand);
    for (auto& d : inst.demand) d = demand_rng.uniform_int(params.demand.lo, params.demand.hi);
    CounterRng prod_rng = stream(kProdCost);
    for (auto& p : inst.prod_cost) {
      p = static_cast<double>(prod_rng.uniform_int(params.prod_cost.lo, params.prod_cost.hi));
    }

    const double mean_demand = static_cast<double>(inst.total_demand()) / static_cast<double>(n);
    const double mean_hold = 1.0;
    const double c = params.c_ratio;
    const long cap_lo = round_half_up(0.7 * c * mean_demand);
    const long cap_hi = round_half_up(1.1 * c * mean_demand);
    CounterRng cap_rng = stream(kCapacity);
    for (auto& cap : inst.capacity) cap = cap_rng.uniform_int(cap_lo, cap_hi);

    const long f_lo = round_half_up(0.9 * params.f_ratio * mean_hold);
    const long f_hi = round_half_up(1.1 * params.f_ratio * mean_hold);
    CounterRng setup_rng = stream(kSetupCost);
    for (auto& f : inst.setup_cost) f = static_cast<double>(setup_rng.uniform_int(f_lo, f_hi));

    if (flow_feasible(inst, FixPlan{})) return inst;
  }
  throw GenerationError("no feasible instance after " + std::to_string(kMaxRedraws) +
                        " redraws (draw " + std::to_string(draw_index) + ")");
}

SplitCounts SplitCounts::standard(std::size_t n) noexcept {
  SplitCounts s;
  s.train = n * 64 / 100;
  s.validation = n * 16 / 100;
  s.test = n - s.train - s.validation;
  return s;
}

Dataset generate_dataset(const GenParams& params, std::size_t n, const Oracle& oracle,
                         std::string solver_name, std::size_t jobs,
                         std::optional<SplitCounts> split) {
  params.validate();
  if (n < kMinDatasetSize) {
    throw UsageError("dataset size must be at least " + std::to_string(kMinDatasetSize));
  }
  const SplitCounts counts = split.value_or(SplitCounts::standard(n));
  if (counts.total() != n) throw UsageError("split counts do not sum to n");

  auto id_of = [&](std::size_t i) {
    if (i < counts.train) return split_id("train", i);
    if (i < counts.train + counts.validation) return split_id("val", i - counts.train);
    return split_id("test", i - counts.train - counts.validation);
  };
  std::vector<LabeledInstance> all(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    LabeledInstance& item = all[i];
    item.id = id_of(i);
    item.instance = generate_instance(params, i);
    item.solution = oracle(item.instance);
    if (item.solution.status != SolveStatus::Optimal) {
      throw DatasetError("oracle failed on instance " + item.id + " (status " +
                         to_string(item.solution.status) + ")");
    }
  });

  Dataset data;
  data.params = params;
  data.solver = std::move(solver_name);
  for (std::size_t i = 0; i < n; ++i) {
    auto& dest = i < counts.train                       ? data.train
                 : i < counts.train + counts.validation ? data.validation
                                                        : data.test;
    dest.push_back(std::move(all[i]));
  }
  return data;
}

std::string gen_params_to_json(const GenParams& params) {
  json j = {{"c_ratio", params.c_ratio},
            {"f_ratio", detail::number(params.f_ratio)},
            {"T", params.horizon},
            {"demand_range", {params.demand.lo, params.demand.hi}},
            {"prod_cost_range", {params.prod_cost.lo, params.prod_cost.hi}},
            {"seed", params.seed}};
  return j.dump();
}

namespace {

void write_split(const fs::path& file, const std::vector<LabeledInstance>& items,
                 bool record_times) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  for (const auto& item : items) {
    const double t = record_times ? item.solution.stats.wall_time_seconds : 0.0;
    out << "{\"instance\":" << instance_to_json(item.instance)
        << ",\"solution\":" << solution_to_json(item.solution, t) << "}\n";
  }
  if (!out) throw IoError("failed writing " + file.string());
}

std::vector<LabeledInstance> read_split(const fs::path& file, const char* split) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::vector<LabeledInstance> items;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = detail::parse_json(line, "dataset line");
    if (!j.contains("instance") || !j.contains("solution")) {
      throw FormatError(file.string() + ": line lacks instance/solution");
    }
    LabeledInstance item;
    item.id = split_id(split, items.size());
    item.instance = instance_from_json(j["instance"].dump());
    item.solution = solution_from_json(j["solution"].dump());
    if (item.solution.y.size() != item.instance.horizon()) {
      throw FormatError(file.string() + ": solution length does not match instance");
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace

void write_dataset(const fs::path& dir, const Dataset& data, bool record_times) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  json meta = {{"format_version", kDatasetFormatVersion},
               {"gen_params", json::parse(gen_params_to_json(data.params))},
               {"solver", data.solver},
               {"counts",
                {{"train", data.train.size()},
                 {"val", data.validation.size()},
                 {"test", data.test.size()}}}};
  {
    std::ofstream out(dir / "meta.json", std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / "meta.json").string());
    out << meta.dump(2) << "\n";
  }
  write_split(dir / "train.jsonl", data.train, record_times);
  write_split(dir / "val.jsonl", data.validation, record_times);
  write_split(dir / "test.jsonl", data.test, record_times);
}

Dataset read_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("dataset directory not found: " + dir.string());
  Dataset data;
  {
    std::ifstream in(dir / "meta.json");
    if (!in) throw IoError("missing " + (dir / "meta.json").string());
    std::stringstream ss;
    ss << in.rdbuf();
    const json meta = detail::parse_json(ss.str(), "dataset meta");
    if (meta.value("format_version", 0) != kDatasetFormatVersion) {
      throw FormatError("unsupported dataset format version");
    }
    if (auto gp = meta.find("gen_params"); gp != meta.end()) {
      data.params.c_ratio = gp->value("c_ratio", 0);
      data.params.f_ratio = gp->value("f_ratio", 0.0);
      data.params.horizon = gp->value("T", std::size_t{0});
      data.params.seed = gp->value("seed", std::uint64_t{0});
      auto dr = gp->value("demand_range", std::vector<long>{1, 600});
      auto pr = gp->value("prod_cost_range", std::vector<long>{1, 5});
      if (dr.size() == 2) data.params.demand = {dr[0], dr[1]};
      if (pr.size() == 2) data.params.prod_cost = {pr[0], pr[1]};
    }
    data.solver = meta.value("solver", std::string{});
  }
  data.train = read_split(dir / "train.jsonl", "train");
  data.validation = read_split(dir / "val.jsonl", "val");
  data.test = read_split(dir / "test.jsonl", "test");
  return data;
}

}  // namespace lstmopt
