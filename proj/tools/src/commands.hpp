#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "manifest.hpp"

namespace lstmopt::cli {

namespace fs = std::filesystem;

inline constexpr double kNoLimit = std::numeric_limits<double>::infinity();

struct GenOptions {
  int c = 3;
  double f = 1000;
  std::size_t T = 20;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  std::string preset = "desk";  // desk: d in [1,60]; large: d in [1,600]
  std::string solver = "dp";    // labelling oracle: dp or bnb
  std::size_t train = 0, val = 0, test = 0;  // all zero: 64/16/20 split
  bool record_times = false;
  std::size_t jobs = 1;
  fs::path out;
};

struct SolveOptions {
  fs::path data;
  std::string split = "test";
  std::string solver = "bnb";
  double time_limit = kNoLimit;
  double gap_tol = 1e-9;
  std::size_t ls_rounds = 5;
  std::size_t jobs = 1;
  fs::path out;
};

struct TrainOptions {
  fs::path data;
  std::size_t layers = 3;
  std::size_t units = 40;
  double dropout = 0.3;
  double lr = 0.01;
  std::size_t batch_size = 64;
  std::size_t epochs = 100;
  std::size_t patience = 10;
  std::uint64_t seed = 0;
  double max_seconds = kNoLimit;
  std::vector<std::string> grid;  // "layers:units:dropout:lr" points
  std::size_t jobs = 1;
  fs::path out;
};

struct PredictOptions {
  fs::path data;
  std::string split = "test";
  fs::path model;
  std::string baseline = "lstm";  // lstm or logistic
  std::size_t chunk_T = 0;        // 0: predict the whole horizon at once
  fs::path out;
};

struct EvaluateOptions {
  fs::path data;
  std::string split = "test";
  fs::path probs;
  std::vector<double> levels{0, 25, 50, 75, 85, 90, 95, 100};
  std::vector<std::string> modes{"hard", "soft", "warm"};
  double time_limit = kNoLimit;
  double gap_tol = 1e-9;
  std::size_t jobs = 1;
  fs::path out;
};

struct ReportOptions {
  std::vector<fs::path> results;
  fs::path out;
};

void run_gen(const GenOptions& o, RunManifest& manifest);
void run_solve(const SolveOptions& o, RunManifest& manifest);
void run_train(const TrainOptions& o, RunManifest& manifest);
void run_predict(const PredictOptions& o, RunManifest& manifest);
void run_evaluate(const EvaluateOptions& o, RunManifest& manifest);
void run_report(const ReportOptions& o, RunManifest& manifest);

}  // namespace lstmopt::cli
