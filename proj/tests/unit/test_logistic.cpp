#include <gtest/gtest.h>

#include <cmath>

#include "lstmopt/errors.hpp"
#include "lstmopt/logistic.hpp"
#include "lstmopt/solvers.hpp"
#include "lstmopt/trainer.hpp"

namespace lstmopt {
namespace {

Dataset small_dataset(std::uint64_t seed) {
  return generate_dataset(desk_preset(3, 100, 12, seed), 40,
                          [](const Instance& i) { return solve_dp(i); });
}

TEST(Logistic, SeparableOneFeatureReachesPerfectAccuracy) {
  Eigen::MatrixXd X(8, 1);
  X << -3, -2, -1.5, -0.5, 0.4, 1, 2, 3;
  const std::vector<double> y{0, 0, 0, 0, 1, 1, 1, 1};
  const LogisticModel m = logistic_fit_samples(X, y, {});
  const auto p = logistic_predict_samples(m, X);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_EQ(threshold_label(p[i]), y[i]) << i;
}

TEST(Logistic, ZeroModelPredictsHalf) {
  LogisticModel m;
  m.weights.assign(kLogisticFeatures, 0.0);
  const Dataset d = small_dataset(1);
  const auto p = logistic_predict(m, d.test[0].instance);
  ASSERT_EQ(p.size(), d.test[0].instance.horizon());
  for (double v : p) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Logistic, ConvexObjectiveFromTwoInitializations) {
  const Dataset d = small_dataset(2);
  const Standardizer s = fit_standardizer(d.train);
  Eigen::MatrixXd X(0, static_cast<Eigen::Index>(kLogisticFeatures));
  std::vector<double> y;
  for (const auto& item : d.train) {
    const Eigen::MatrixXd f = logistic_features(item.instance, s);
    X.conservativeResize(X.rows() + f.rows(), Eigen::NoChange);
    X.bottomRows(f.rows()) = f;
    y.insert(y.end(), item.solution.y.begin(), item.solution.y.end());
  }
  LogisticConfig cfg;
  cfg.l2 = 1e-3;  // strictly convex, unique minimizer
  cfg.epochs = 20000;
  LogisticModel far;
  far.weights.assign(kLogisticFeatures, 2.0);
  far.bias = -3.0;
  const LogisticModel a = logistic_fit_samples(X, y, cfg);
  const LogisticModel b = logistic_fit_samples(X, y, cfg, far);
  EXPECT_NEAR(a.final_loss, b.final_loss, 1e-4);
}

TEST(Logistic, FitOnDatasetBeatsConstantPredictor) {
  const Dataset d = small_dataset(3);
  const Standardizer s = fit_standardizer(d.train);
  const LogisticModel m = logistic_fit(d.train, s);
  EXPECT_LT(m.final_loss, std::log(2.0));
  for (double w : m.weights) EXPECT_TRUE(std::isfinite(w));
}

TEST(Logistic, PeriodIndependence) {
  // Permuting other periods within the prefix [1, t-1] and within the
  // suffix [t+1, T] keeps t's own features and every aggregate fixed.
  const Dataset d = small_dataset(4);
  const Standardizer s = fit_standardizer(d.train);
  const LogisticModel m = logistic_fit(d.train, s);
  const Instance inst = d.test[0].instance;
  const std::size_t t = 5;
  Instance permuted = inst;
  auto swap_periods = [&](std::size_t a, std::size_t b) {
    std::swap(permuted.demand[a], permuted.demand[b]);
    std::swap(permuted.capacity[a], permuted.capacity[b]);
    std::swap(permuted.prod_cost[a], permuted.prod_cost[b]);
    std::swap(permuted.setup_cost[a], permuted.setup_cost[b]);
  };
  swap_periods(0, 3);
  swap_periods(1, 2);
  swap_periods(7, 11);
  swap_periods(6, 9);
  EXPECT_EQ(logistic_predict(m, inst)[t], logistic_predict(m, permuted)[t]);
}

TEST(Logistic, RecipeMismatchAndShapeErrors) {
  LogisticModel m;
  m.weights.assign(kLogisticFeatures, 0.1);
  m.recipe = "something-else";
  const Dataset d = small_dataset(5);
  EXPECT_THROW(logistic_predict(m, d.test[0].instance), ModelError);
  m.recipe = kLogisticRecipe;
  m.weights.resize(3);
  EXPECT_THROW(logistic_predict(m, d.test[0].instance), ModelError);
}

TEST(Logistic, DivergenceNamesEpoch) {
  Eigen::MatrixXd X(2, 1);
  X << 1e200, -1e200;
  const std::vector<double> y{0, 1};
  LogisticConfig cfg;
  cfg.learning_rate = 1e200;
  try {
    logistic_fit_samples(X, y, cfg);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

}  // namespace
}  // namespace lstmopt
