#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "lstmopt/errors.hpp"

using namespace lstmopt;
using namespace lstmopt::cli;

namespace {

constexpr int kExitUsage = static_cast<int>(ErrorKind::Usage);

void add_jobs(CLI::App* sub, std::size_t& jobs) {
  sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void add_out(CLI::App* sub, fs::path& out) {
  sub->add_option("--out", out, "Output directory (receives manifest.json)")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lot-sizing toolkit: instance generation, exact solvers, BiLSTM setup prediction"};
  app.set_version_flag("--version", LSTMOPT_VERSION);
  app.set_config("--config", "", "TOML file mirroring the flags; flags on the command line win");
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a labelled dataset");
  gen_cmd->add_option("--c", gen.c, "Capacity-to-demand ratio")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--f", gen.f, "Setup-to-holding cost ratio")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--T", gen.T, "Horizon")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n", gen.n, "Number of instances");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--preset", gen.preset, "desk (d in [1,60]) or large (d in [1,600])");
  gen_cmd->add_option("--solver", gen.solver, "Labelling oracle: dp or bnb");
  gen_cmd->add_option("--train", gen.train, "Override split: train count");
  gen_cmd->add_option("--val", gen.val, "Override split: validation count");
  gen_cmd->add_option("--test", gen.test, "Override split: test count");
  gen_cmd->add_flag("--record-times", gen.record_times, "Store oracle solve times");
  add_jobs(gen_cmd, gen.jobs);
  add_out(gen_cmd, gen.out);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a dataset split with an exact solver");
  solve_cmd->add_option("--data", solve.data, "Dataset directory")->required();
  solve_cmd->add_option("--split", solve.split, "train, val, test or all");
  solve_cmd->add_option("--solver", solve.solver, "bnb, dp, lscuts or brute");
  solve_cmd->add_option("--time-limit", solve.time_limit, "Seconds per instance");
  solve_cmd->add_option("--gap-tol", solve.gap_tol, "Relative gap tolerance");
  solve_cmd->add_option("--ls-rounds", solve.ls_rounds, "Root separation rounds for lscuts");
  add_jobs(solve_cmd, solve.jobs);
  add_out(solve_cmd, solve.out);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train the BiLSTM on a dataset");
  train_cmd->add_option("--data", train.data, "Dataset directory")->required();
  train_cmd->add_option("--layers", train.layers, "Stacked BiLSTM layers");
  train_cmd->add_option("--units", train.units, "Hidden units per direction");
  train_cmd->add_option("--dropout", train.dropout, "Dropout rate after each layer");
  train_cmd->add_option("--lr", train.lr, "Adam learning rate");
  train_cmd->add_option("--batch-size", train.batch_size, "Minibatch size");
  train_cmd->add_option("--epochs", train.epochs, "Maximum epochs");
  train_cmd->add_option("--patience", train.patience, "Early-stopping patience");
  train_cmd->add_option("--seed", train.seed, "Initialization and shuffling seed");
  train_cmd->add_option("--max-seconds", train.max_seconds, "Wall-clock training budget");
  train_cmd->add_option("--grid", train.grid, "Tuning grid points layers:units:dropout:lr")
      ->delimiter(',');
  add_jobs(train_cmd, train.jobs);
  add_out(train_cmd, train.out);

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Write per-period setup probabilities");
  predict_cmd->add_option("--data", predict.data, "Dataset directory")->required();
  predict_cmd->add_option("--split", predict.split, "train, val, test or all");
  predict_cmd->add_option("--model", predict.model, "Model file from train");
  predict_cmd->add_option("--baseline", predict.baseline, "lstm or logistic");
  predict_cmd->add_option("--chunk-T", predict.chunk_T, "Predict in chunks of this length");
  add_out(predict_cmd, predict.out);

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Re-solve with predictions and record metrics");
  eval_cmd->add_option("--data", eval.data, "Dataset directory")->required();
  eval_cmd->add_option("--split", eval.split, "train, val, test or all");
  eval_cmd->add_option("--probs", eval.probs, "probabilities.jsonl")->required();
  eval_cmd->add_option("--levels", eval.levels, "Prediction levels in percent")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 100.0));
  eval_cmd->add_option("--mode", eval.modes, "hard, soft, warm and/or plain")->delimiter(',');
  eval_cmd->add_option("--time-limit", eval.time_limit, "Seconds per solve");
  eval_cmd->add_option("--gap-tol", eval.gap_tol, "Relative gap tolerance");
  add_jobs(eval_cmd, eval.jobs);
  add_out(eval_cmd, eval.out);

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Aggregate results CSVs into tables");
  report_cmd->add_option("--results", report.results, "results.csv files")->required();
  add_out(report_cmd, report.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  RunManifest manifest(chosen->get_name(), std::vector<std::string>(argv, argv + argc),
                       chosen->config_to_str(true, false));
  fs::path out;
  try {
    if (chosen == gen_cmd) {
      run_gen(gen, manifest);
      out = gen.out;
    } else if (chosen == solve_cmd) {
      run_solve(solve, manifest);
      out = solve.out;
    } else if (chosen == train_cmd) {
      run_train(train, manifest);
      out = train.out;
    } else if (chosen == predict_cmd) {
      run_predict(predict, manifest);
      out = predict.out;
    } else if (chosen == eval_cmd) {
      run_evaluate(eval, manifest);
      out = eval.out;
    } else {
      run_report(report, manifest);
      out = report.out;
    }
    manifest.write(out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
