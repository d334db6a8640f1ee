#include "lstmopt/trainer.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <numeric>

#include "lstmopt/adam.hpp"
#include "lstmopt/errors.hpp"
#include "lstmopt/random.hpp"

namespace lstmopt {

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw UsageError("learning rate must be positive");
  if (batch_size < 1) throw UsageError("batch size must be at least 1");
  if (max_epochs < 1) throw UsageError("max_epochs must be at least 1");
}

void HyperParams::validate() const {
  if (layers < 2 || layers > 6) throw UsageError("layers outside [2, 6]");
  if (units < 10 || units > 150) throw UsageError("units outside [10, 150]");
  if (dropout < 0.1 || dropout > 0.5) throw UsageError("dropout outside [0.1, 0.5]");
  if (learning_rate < 0.001 || learning_rate > 0.1) {
    throw UsageError("learning rate outside [0.001, 0.1]");
  }
}

Standardizer fit_standardizer(std::span<const LabeledInstance> train_split) {
  std::vector<Eigen::MatrixXd> feats;
  feats.reserve(train_split.size());
  for (const auto& item : train_split) feats.push_back(instance_features(item.instance));
  return Standardizer::fit(feats);
}

std::vector<Example> make_examples(std::span<const LabeledInstance> split,
                                   const Standardizer& standardizer) {
  std::vector<Example> out;
  out.reserve(split.size());
  for (const auto& item : split) {
    Example ex;
    ex.features = standardizer.transform(instance_features(item.instance));
    ex.labels.assign(item.solution.y.begin(), item.solution.y.end());
    out.push_back(std::move(ex));
  }
  return out;
}

double prediction_accuracy(std::span<const std::vector<double>> probs,
                           std::span<const std::vector<double>> labels) {
  if (probs.size() != labels.size()) throw DimensionError("accuracy: split size mismatch");
  std::size_t correct = 0, total = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i].size() != labels[i].size()) throw DimensionError("accuracy: horizon mismatch");
    for (std::size_t t = 0; t < probs[i].size(); ++t) {
      correct += threshold_label(probs[i][t]) == static_cast<int>(labels[i][t]);
      ++total;
    }
  }
  if (total == 0) throw DimensionError("accuracy: empty split");
  return static_cast<double>(correct) / static_cast<double>(total);
}

double validation_accuracy(const BiLstmModel& model, std::span<const Example> split) {
  if (split.empty()) throw DimensionError("validation_accuracy: empty split");
  BiLstmModel eval = model;
  eval.training_mode = false;
  std::vector<std::vector<double>> probs, labels;
  for (const auto& ex : split) {
    probs.push_back(bilstm_forward(eval, ex.features));
    labels.push_back(ex.labels);
  }
  return prediction_accuracy(probs, labels);
}

TrainResult train(BiLstmModel model, std::span<const Example> train_split,
                  std::span<const Example> val_split, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  config.validate();
  if (train_split.empty()) throw UsageError("training split is empty");
  if (val_split.empty()) throw UsageError("validation split is empty");
  const auto wall_start = std::chrono::steady_clock::now();
  const std::clock_t cpu_start = std::clock();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  };

  TrainResult result;
  model.training_mode = false;
  result.initial_loss = batch_loss(model, train_split);
  result.best_val_accuracy = validation_accuracy(model, val_split);
  result.model = model;

  AdamConfig adam{config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_eps};
  AdamState state(model.num_params());
  std::vector<std::size_t> order(train_split.size());
  std::vector<double> grad;
  std::vector<Example> batch;
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    CounterRng shuffle_rng({config.seed, 0x5u, epoch});
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    model.training_mode = true;
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(train_split[order[k]]);
      const std::uint64_t mask_seed = mix_key({config.seed, 0xd0u, epoch, batches});
      const double loss = backprop(model, batch, grad, mask_seed, config.jobs);
      if (!std::isfinite(loss)) {
        throw DivergenceError("training diverged: non-finite loss in epoch " + std::to_string(epoch));
      }
      adam_step(model.params(), grad, state, adam);
      loss_sum += loss;
      ++batches;
    }
    model.training_mode = false;

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(batches);
    rec.val_accuracy = validation_accuracy(model, val_split);
    rec.wall_time = elapsed();
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (rec.val_accuracy > result.best_val_accuracy || result.best_epoch == 0) {
      result.best_val_accuracy = rec.val_accuracy;
      result.best_epoch = epoch;
      result.model = model;
      stale = 0;
    } else if (++stale >= config.early_stop_patience) {
      break;
    }
    if (rec.wall_time > config.max_seconds) break;
  }
  result.model.training_mode = false;
  result.wall_seconds = elapsed();
  result.cpu_seconds = static_cast<double>(std::clock() - cpu_start) / CLOCKS_PER_SEC;
  return result;
}

std::size_t argmax_first(std::span<const double> values) {
  if (values.empty()) throw UsageError("argmax over an empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

TuneResult tune_hyperparameters(std::span<const HyperParams> grid,
                                std::span<const Example> train_split,
                                std::span<const Example> val_split, const Standardizer& standardizer,
                                const TrainConfig& base) {
  if (grid.empty()) throw UsageError("hyperparameter grid is empty");
  for (const auto& hp : grid) hp.validate();
  TuneResult out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const HyperParams& hp = grid[i];
    BiLstmModel model(BiLstmConfig{kNumFeatures, hp.layers, hp.units, hp.dropout});
    model.initialize(base.seed);
    model.standardizer = standardizer;
    TrainConfig cfg = base;
    cfg.learning_rate = hp.learning_rate;
    TrainResult r = train(std::move(model), train_split, val_split, cfg);
    out.val_accuracies.push_back(r.best_val_accuracy);
    if (i == 0 || r.best_val_accuracy > out.val_accuracies[out.best_index]) {
      out.best_index = i;
      out.best = std::move(r);
    }
  }
  return out;
}

}  // namespace lstmopt
