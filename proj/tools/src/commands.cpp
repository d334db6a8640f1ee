#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "lstmopt/errors.hpp"
#include "lstmopt/generator.hpp"
#include "lstmopt/logistic.hpp"
#include "lstmopt/model_io.hpp"
#include "lstmopt/parallel.hpp"
#include "lstmopt/pipeline.hpp"
#include "lstmopt/results_io.hpp"
#include "lstmopt/solvers.hpp"
#include "lstmopt/trainer.hpp"

namespace lstmopt::cli {
namespace {

using Clock = std::chrono::steady_clock;

void prepare_out(const fs::path& out) {
  if (out.empty()) throw UsageError("--out is required");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

std::vector<LabeledInstance> select_split(const Dataset& d, const std::string& split) {
  if (split == "train") return d.train;
  if (split == "val") return d.validation;
  if (split == "test") return d.test;
  if (split == "all") {
    std::vector<LabeledInstance> all = d.train;
    all.insert(all.end(), d.validation.begin(), d.validation.end());
    all.insert(all.end(), d.test.begin(), d.test.end());
    return all;
  }
  throw UsageError("unknown split '" + split + "' (expected train, val, test or all)");
}

std::vector<LabeledInstance> load_split(const fs::path& data, const std::string& split) {
  auto items = select_split(read_dataset(data), split);
  if (items.empty()) throw UsageError("split '" + split + "' of " + data.string() + " is empty");
  return items;
}

Oracle make_oracle(const std::string& solver, const BnbOptions& bnb, std::size_t ls_rounds) {
  if (solver == "bnb") return [bnb](const Instance& i) { return branch_and_bound(i, {}, bnb); };
  if (solver == "dp") return [](const Instance& i) { return solve_dp(i); };
  if (solver == "brute") return [](const Instance& i) { return brute_force(i); };
  if (solver == "lscuts") {
    return [bnb, ls_rounds](const Instance& i) { return solve_with_ls_cuts(i, ls_rounds, bnb); };
  }
  throw UsageError("unknown solver '" + solver + "' (expected bnb, dp, lscuts or brute)");
}

HyperParams parse_grid_point(const std::string& text) {
  HyperParams hp;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(text);
  if (!(in >> hp.layers >> c1 >> hp.units >> c2 >> hp.dropout >> c3 >> hp.learning_rate) ||
      c1 != ':' || c2 != ':' || c3 != ':' || !in.eof()) {
    throw UsageError("grid point '" + text + "' must look like layers:units:dropout:lr");
  }
  hp.validate();
  return hp;
}

}  // namespace

void run_gen(const GenOptions& o, RunManifest& manifest) {
  GenParams params;
  if (o.preset == "desk") {
    params = desk_preset(o.c, o.f, o.T, o.seed);
  } else if (o.preset == "large") {
    params = large_preset(o.c, o.f, o.T, o.seed);
  } else {
    throw UsageError("unknown preset '" + o.preset + "' (expected desk or large)");
  }
  params.validate();
  if (o.n < kMinDatasetSize) {
    throw UsageError("--n must be at least " + std::to_string(kMinDatasetSize));
  }
  std::optional<SplitCounts> split;
  if (o.train + o.val + o.test > 0) {
    split = SplitCounts{o.train, o.val, o.test};
    if (split->total() != o.n) throw UsageError("--train + --val + --test must equal --n");
  }
  if (o.solver != "dp" && o.solver != "bnb") throw UsageError("gen --solver must be dp or bnb");
  prepare_out(o.out);
  const Dataset d =
      generate_dataset(params, o.n, make_oracle(o.solver, {}, 0), o.solver, o.jobs, split);
  write_dataset(o.out, d, o.record_times);
  manifest.add_seed("generator", o.seed);
  std::cout << "wrote " << d.train.size() << '/' << d.validation.size() << '/' << d.test.size()
            << " instances to " << o.out.string() << '\n';
}

void run_solve(const SolveOptions& o, RunManifest& manifest) {
  BnbOptions bnb;
  bnb.time_limit_seconds = o.time_limit;
  bnb.gap_tol = o.gap_tol;
  const Oracle solve = make_oracle(o.solver, bnb, o.ls_rounds);
  const auto items = load_split(o.data, o.split);
  if (o.solver == "brute") {
    for (const auto& item : items) {
      if (item.instance.horizon() > kMaxBruteForceHorizon) {
        throw ResourceError("brute force is limited to T <= " +
                            std::to_string(kMaxBruteForceHorizon) + "; " + item.id + " has T = " +
                            std::to_string(item.instance.horizon()));
      }
    }
  }
  prepare_out(o.out);
  std::vector<SolveRow> rows(items.size());
  parallel_for(items.size(), o.jobs, [&](std::size_t i) {
    rows[i] = SolveRow{items[i].id, items[i].instance.horizon(), o.solver, solve(items[i].instance)};
  });
  auto out = open_out(o.out / "results.csv");
  write_solve_csv(out, rows);
  std::size_t optimal = 0;
  for (const auto& r : rows) optimal += r.solution.status == SolveStatus::Optimal;
  manifest.set("instances", rows.size());
  std::cout << "solved " << rows.size() << " instances with " << o.solver << " (" << optimal
            << " optimal)\n";
}

void run_train(const TrainOptions& o, RunManifest& manifest) {
  const Dataset d = read_dataset(o.data);
  if (d.train.empty() || d.validation.empty()) {
    throw UsageError("training needs non-empty train and val splits");
  }
  TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.batch_size = o.batch_size;
  cfg.max_epochs = o.epochs;
  cfg.early_stop_patience = o.patience;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.max_seconds = o.max_seconds;
  cfg.validate();
  prepare_out(o.out);

  const Standardizer standardizer = fit_standardizer(d.train);
  const auto train_ex = make_examples(d.train, standardizer);
  const auto val_ex = make_examples(d.validation, standardizer);

  TrainResult result;
  HyperParams chosen{o.layers, o.units, o.dropout, o.lr};
  if (!o.grid.empty()) {
    std::vector<HyperParams> grid;
    for (const auto& g : o.grid) grid.push_back(parse_grid_point(g));
    TuneResult tuned = tune_hyperparameters(grid, train_ex, val_ex, standardizer, cfg);
    chosen = grid[tuned.best_index];
    manifest.set("grid_val_accuracy", tuned.val_accuracies);
    result = std::move(tuned.best);
  } else {
    BiLstmModel model(BiLstmConfig{kNumFeatures, o.layers, o.units, o.dropout});
    model.initialize(o.seed);
    model.standardizer = standardizer;
    result = train(std::move(model), train_ex, val_ex, cfg, [](const EpochRecord& e) {
      std::cerr << "epoch " << e.epoch << " loss " << e.train_loss << " val_acc "
                << e.val_accuracy << '\n';
    });
  }
  save_model(o.out / "model.bin", result.model);
  auto hist = open_out(o.out / "history.csv");
  write_history_csv(hist, result.history);
  hist.close();

  manifest.add_seed("train", o.seed);
  manifest.set("hyperparameters", {{"layers", chosen.layers},
                                   {"units", chosen.units},
                                   {"dropout", chosen.dropout},
                                   {"learning_rate", chosen.learning_rate},
                                   {"batch_size", o.batch_size},
                                   {"max_epochs", o.epochs},
                                   {"patience", o.patience}});
  manifest.set("best_epoch", result.best_epoch);
  manifest.set("best_val_accuracy", result.best_val_accuracy);
  manifest.set("train_wall_seconds", result.wall_seconds);
  manifest.set("train_cpu_seconds", result.cpu_seconds);
  std::cout << "best epoch " << result.best_epoch << ", validation accuracy "
            << result.best_val_accuracy << ", " << result.cpu_seconds << " CPU s\n";
}

void run_predict(const PredictOptions& o, RunManifest& manifest) {
  const Dataset d = read_dataset(o.data);
  const auto items = select_split(d, o.split);
  if (items.empty()) throw UsageError("split '" + o.split + "' is empty");
  Predictor predictor;
  std::string source;
  std::optional<BiLstmModel> model;
  if (!o.model.empty()) model = load_model(o.model);
  if (o.baseline == "lstm") {
    if (!model) throw UsageError("--model is required for the lstm predictor");
    predictor = [&](const Instance& i) { return predict_instance(*model, i); };
    source = "bilstm";
  } else if (o.baseline == "logistic") {
    if (d.train.empty()) throw UsageError("logistic baseline needs a non-empty train split");
    const Standardizer s = model ? model->standardizer : fit_standardizer(d.train);
    auto lr = std::make_shared<LogisticModel>(logistic_fit(d.train, s));
    manifest.set("logistic_final_loss", lr->final_loss);
    manifest.set("logistic_recipe", lr->recipe);
    predictor = [lr](const Instance& i) { return logistic_predict(*lr, i); };
    source = "logistic";
  } else {
    throw UsageError("unknown --baseline '" + o.baseline + "' (expected lstm or logistic)");
  }
  prepare_out(o.out);
  std::vector<ProbRecord> records;
  for (const auto& item : items) {
    PredictionVector pred;
    if (o.chunk_T > 0) {
      pred = concat_predictions(predictor, item.instance, o.chunk_T, source);
    } else {
      const auto start = Clock::now();
      pred.probs = predictor(item.instance);
      pred.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      pred.source = source;
    }
    records.push_back({item.id, std::move(pred)});
  }
  auto out = open_out(o.out / "probabilities.jsonl");
  write_probabilities(out, records, true);
  manifest.set("source", source);
  std::cout << "wrote " << records.size() << " probability vectors (" << source << ")\n";
}

void run_evaluate(const EvaluateOptions& o, RunManifest& manifest) {
  const auto items = load_split(o.data, o.split);
  auto in = open_in(o.probs);
  std::map<std::string, PredictionVector> by_id;
  for (auto& r : read_probabilities(in)) by_id[r.instance_id] = std::move(r.pred);
  std::vector<PredictionVector> preds;
  for (const auto& item : items) {
    const auto it = by_id.find(item.id);
    if (it == by_id.end()) throw ValidationError("no prediction for instance " + item.id);
    preds.push_back(it->second);
  }
  EvalRequest req;
  req.levels = o.levels;
  req.modes.clear();
  for (const auto& m : o.modes) req.modes.push_back(parse_mode(m));
  req.bnb.time_limit_seconds = o.time_limit;
  req.bnb.gap_tol = o.gap_tol;
  req.jobs = o.jobs;
  prepare_out(o.out);
  const auto records = evaluate(items, preds, req);
  auto out = open_out(o.out / "results.csv");
  write_results_csv(out, records);
  out.close();
  manifest.set("records", records.size());
  std::cout << render_report(aggregate(records));
}

void run_report(const ReportOptions& o, RunManifest& manifest) {
  if (o.results.empty()) throw UsageError("--results is required");
  std::vector<EvalRecord> records;
  for (const auto& path : o.results) {
    auto in = open_in(path);
    auto part = read_results_csv(in);
    records.insert(records.end(), part.begin(), part.end());
  }
  if (records.empty()) throw UsageError("no records in the given results files");
  prepare_out(o.out);
  const auto groups = aggregate(records);
  open_out(o.out / "report.md") << render_report(groups);
  open_out(o.out / "figure_optgap.csv") << render_figure_csv(groups, FigureMetric::OptGap);
  open_out(o.out / "figure_inf.csv") << render_figure_csv(groups, FigureMetric::Infeasibility);
  open_out(o.out / "figure_timeimp.csv")
      << render_figure_csv(groups, FigureMetric::TimeImprovement);
  manifest.set("records", records.size());
  std::cout << "aggregated " << records.size() << " records into " << groups.size()
            << " groups\n";
}

}  // namespace lstmopt::cli
