#include "lstmopt/standardizer.hpp"

#include <cmath>

#include "lstmopt/errors.hpp"

namespace lstmopt {

Eigen::MatrixXd instance_features(const Instance& inst) {
  const auto n = static_cast<Eigen::Index>(inst.horizon());
  Eigen::MatrixXd f(n, static_cast<Eigen::Index>(kNumFeatures));
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto i = static_cast<std::size_t>(t);
    f(t, 0) = inst.prod_cost[i];
    f(t, 1) = inst.setup_cost[i];
    f(t, 2) = static_cast<double>(inst.capacity[i]);
    f(t, 3) = static_cast<double>(inst.demand[i]);
  }
  return f;
}

Standardizer Standardizer::fit(std::span<const Eigen::MatrixXd> train_features) {
  if (train_features.empty()) throw DimensionError("standardize_fit: empty training set");
  Standardizer s;
  // Two passes for numerical stability.
  std::array<double, kNumFeatures> sum{0, 0, 0, 0};
  double count = 0.0;
  for (const auto& m : train_features) {
    if (m.cols() != static_cast<Eigen::Index>(kNumFeatures)) {
      throw DimensionError("standardize_fit: feature matrices must have 4 columns");
    }
    for (std::size_t k = 0; k < kNumFeatures; ++k) sum[k] += m.col(static_cast<Eigen::Index>(k)).sum();
    count += static_cast<double>(m.rows());
  }
  if (count == 0.0) throw DimensionError("standardize_fit: no periods in training set");
  for (std::size_t k = 0; k < kNumFeatures; ++k) s.mean[k] = sum[k] / count;
  std::array<double, kNumFeatures> sq{0, 0, 0, 0};
  for (const auto& m : train_features) {
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
      sq[k] += (m.col(static_cast<Eigen::Index>(k)).array() - s.mean[k]).square().sum();
    }
  }
  for (std::size_t k = 0; k < kNumFeatures; ++k) {
    s.stddev[k] = std::max(std::sqrt(sq[k] / count), kStdFloor);
  }
  return s;
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& raw) const {
  if (raw.cols() != static_cast<Eigen::Index>(kNumFeatures)) {
    throw DimensionError("standardizer: expected 4 feature columns");
  }
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index k = 0; k < raw.cols(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    out.col(k) = (raw.col(k).array() - mean[i]) / stddev[i];
  }
  return out;
}

Eigen::MatrixXd Standardizer::inverse_transform(const Eigen::MatrixXd& standardized) const {
  Eigen::MatrixXd out(standardized.rows(), standardized.cols());
  for (Eigen::Index k = 0; k < standardized.cols(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    out.col(k) = standardized.col(k).array() * stddev[i] + mean[i];
  }
  return out;
}

}  // namespace lstmopt
