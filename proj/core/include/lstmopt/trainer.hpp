#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "lstmopt/bilstm.hpp"
#include "lstmopt/generator.hpp"

namespace lstmopt {

struct TrainConfig {
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  std::size_t early_stop_patience = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  // Wall-clock budget; training stops after the epoch that crosses it.
  double max_seconds = std::numeric_limits<double>::infinity();

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  double wall_time = 0.0;  // seconds since training started
};

struct TrainResult {
  BiLstmModel model;  // parameters of the best validation epoch
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
  double initial_loss = 0.0;  // training loss before the first update
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
};

Standardizer fit_standardizer(std::span<const LabeledInstance> train_split);

// Standardized features and optimal setups as labels.
std::vector<Example> make_examples(std::span<const LabeledInstance> split,
                                   const Standardizer& standardizer);

// Fraction of (instance, period) pairs whose thresholded prediction equals
// the label.
double validation_accuracy(const BiLstmModel& model, std::span<const Example> split);
double prediction_accuracy(std::span<const std::vector<double>> probs,
                           std::span<const std::vector<double>> labels);

// Minibatch Adam with per-epoch validation; keeps the best-validation
// parameters. Throws DivergenceError on a non-finite loss.
TrainResult train(BiLstmModel model, std::span<const Example> train_split,
                  std::span<const Example> val_split, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

struct HyperParams {
  std::size_t layers = 3;
  std::size_t units = 40;
  double dropout = 0.3;
  double learning_rate = 0.01;

  // Search box: layers [2,6], units [10,150], dropout [0.1,0.5], lr [0.001,0.1].
  void validate() const;
};

struct TuneResult {
  std::size_t best_index = 0;
  std::vector<double> val_accuracies;
  TrainResult best;
};

// Index of the largest value; ties resolve to the earliest.
std::size_t argmax_first(std::span<const double> values);

TuneResult tune_hyperparameters(std::span<const HyperParams> grid,
                                std::span<const Example> train_split,
                                std::span<const Example> val_split, const Standardizer& standardizer,
                                const TrainConfig& base);

}  // namespace lstmopt
