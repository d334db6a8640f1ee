#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>

#include "lstmopt/clsp.hpp"

namespace lstmopt {

inline constexpr std::size_t kNumFeatures = 4;
inline constexpr double kStdFloor = 1e-8;

// T x 4 raw per-period features in column order (p_t, f_t, cap_t, d_t).
// Holding cost is constant and left out.
Eigen::MatrixXd instance_features(const Instance& inst);

// Per-feature mean and population standard deviation, pooled over every
// (instance, period) pair of a training split.
struct Standardizer {
  std::array<double, kNumFeatures> mean{0, 0, 0, 0};
  std::array<double, kNumFeatures> stddev{1, 1, 1, 1};

  static Standardizer fit(std::span<const Eigen::MatrixXd> train_features);

  Eigen::MatrixXd transform(const Eigen::MatrixXd& raw) const;
  Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& standardized) const;
  double transform_value(std::size_t feature, double raw) const {
    return (raw - mean[feature]) / stddev[feature];
  }
};

}  // namespace lstmopt
