#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lstmopt/generator.hpp"
#include "lstmopt/standardizer.hpp"

namespace lstmopt {

// Per-period features without recurrent state: standardized (p, f, cap, d),
// t/T, instance mean demand and mean capacity (standardized with the d and
// cap statistics), and cumulative demand share up to t.
inline constexpr const char* kLogisticRecipe = "lr-period-v1";
inline constexpr std::size_t kLogisticFeatures = 8;

Eigen::MatrixXd logistic_features(const Instance& inst, const Standardizer& standardizer);

struct LogisticConfig {
  double learning_rate = 0.5;
  std::size_t epochs = 2000;
  double l2 = 0.0;
  // Stop once the loss improves by less than this between epochs.
  double tolerance = 1e-12;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::string recipe = kLogisticRecipe;
  Standardizer standardizer;
  double final_loss = 0.0;
};

// Full-batch gradient descent on mean BCE (+ l2/2 |w|^2) over the rows of X.
LogisticModel logistic_fit_samples(const Eigen::MatrixXd& X, std::span<const double> labels,
                                   const LogisticConfig& config,
                                   std::optional<LogisticModel> init = std::nullopt);

LogisticModel logistic_fit(std::span<const LabeledInstance> split, const Standardizer& standardizer,
                           const LogisticConfig& config = {});

std::vector<double> logistic_predict_samples(const LogisticModel& model, const Eigen::MatrixXd& X);
std::vector<double> logistic_predict(const LogisticModel& model, const Instance& inst);

}  // namespace lstmopt
