#include "lstmopt/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lstmopt/bilstm.hpp"
#include "lstmopt/errors.hpp"

namespace lstmopt {
namespace {

double mean_bce(const Eigen::VectorXd& probs, std::span<const double> labels) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kProbClip, 1.0 - kProbClip);
    const double y = labels[static_cast<std::size_t>(i)];
    sum -= y * std::log(p) + (1 - y) * std::log(1 - p);
  }
  return sum / static_cast<double>(probs.size());
}

Eigen::VectorXd scores_to_probs(const Eigen::VectorXd& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

}  // namespace

Eigen::MatrixXd logistic_features(const Instance& inst, const Standardizer& standardizer) {
  const Eigen::MatrixXd raw = instance_features(inst);
  const Eigen::MatrixXd z = standardizer.transform(raw);
  const Eigen::Index T = raw.rows();
  Eigen::MatrixXd X(T, static_cast<Eigen::Index>(kLogisticFeatures));
  X.leftCols(4) = z;
  const double d_bar = raw.col(3).mean();
  const double cap_bar = raw.col(2).mean();
  const double total = raw.col(3).sum();
  double cumulative = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    cumulative += raw(t, 3);
    X(t, 4) = static_cast<double>(t + 1) / static_cast<double>(T);
    X(t, 5) = standardizer.transform_value(3, d_bar);
    X(t, 6) = standardizer.transform_value(2, cap_bar);
    X(t, 7) = total > 0 ? cumulative / total : 0.0;
  }
  return X;
}

LogisticModel logistic_fit_samples(const Eigen::MatrixXd& X, std::span<const double> labels,
                                   const LogisticConfig& config, std::optional<LogisticModel> init) {
  if (X.rows() == 0) throw UsageError("logistic_fit: no samples");
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw DimensionError("logistic_fit: label count mismatch");
  }
  if (!(config.learning_rate > 0)) throw UsageError("logistic_fit: learning rate must be positive");
  const Eigen::Map<const Eigen::VectorXd> y(labels.data(), X.rows());
  LogisticModel model = init.value_or(LogisticModel{});
  if (model.weights.empty()) model.weights.assign(static_cast<std::size_t>(X.cols()), 0.0);
  if (model.weights.size() != static_cast<std::size_t>(X.cols())) {
    throw DimensionError("logistic_fit: initial weights do not match feature count");
  }
  Eigen::Map<Eigen::VectorXd> w(model.weights.data(), X.cols());
  const double n = static_cast<double>(X.rows());
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const Eigen::VectorXd p = scores_to_probs((X * w).array() + model.bias);
    const double loss = mean_bce(p, labels) + 0.5 * config.l2 * w.squaredNorm();
    if (!std::isfinite(loss)) {
      throw DivergenceError("logistic fit diverged in epoch " + std::to_string(epoch));
    }
    model.final_loss = loss;
    if (prev - loss >= 0 && prev - loss < config.tolerance) break;
    prev = loss;
    const Eigen::VectorXd r = p - y;
    const Eigen::VectorXd gw = X.transpose() * r / n + config.l2 * w;
    w -= config.learning_rate * gw;
    model.bias -= config.learning_rate * r.sum() / n;
  }
  return model;
}

LogisticModel logistic_fit(std::span<const LabeledInstance> split, const Standardizer& standardizer,
                           const LogisticConfig& config) {
  if (split.empty()) throw UsageError("logistic_fit: empty split");
  Eigen::Index rows = 0;
  for (const auto& item : split) rows += static_cast<Eigen::Index>(item.instance.horizon());
  Eigen::MatrixXd X(rows, static_cast<Eigen::Index>(kLogisticFeatures));
  std::vector<double> labels;
  labels.reserve(static_cast<std::size_t>(rows));
  Eigen::Index at = 0;
  for (const auto& item : split) {
    const Eigen::MatrixXd f = logistic_features(item.instance, standardizer);
    X.middleRows(at, f.rows()) = f;
    at += f.rows();
    labels.insert(labels.end(), item.solution.y.begin(), item.solution.y.end());
  }
  LogisticModel model = logistic_fit_samples(X, labels, config);
  model.standardizer = standardizer;
  return model;
}

std::vector<double> logistic_predict_samples(const LogisticModel& model, const Eigen::MatrixXd& X) {
  if (model.weights.size() != static_cast<std::size_t>(X.cols())) {
    throw ModelError("logistic model expects " + std::to_string(model.weights.size()) +
                     " features, got " + std::to_string(X.cols()));
  }
  const Eigen::Map<const Eigen::VectorXd> w(model.weights.data(), X.cols());
  const Eigen::VectorXd p = scores_to_probs((X * w).array() + model.bias);
  return {p.data(), p.data() + p.size()};
}

std::vector<double> logistic_predict(const LogisticModel& model, const Instance& inst) {
  if (model.recipe != kLogisticRecipe) {
    throw ModelError("logistic feature recipe mismatch: model uses '" + model.recipe +
                     "', this build provides '" + kLogisticRecipe + "'");
  }
  return logistic_predict_samples(model, logistic_features(inst, model.standardizer));
}

}  // namespace lstmopt
