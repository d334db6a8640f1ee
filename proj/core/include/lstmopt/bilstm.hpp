#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lstmopt/standardizer.hpp"

namespace lstmopt {

struct BiLstmConfig {
  std::size_t input_size = kNumFeatures;
  std::size_t layers = 3;
  std::size_t width = 40;  // hidden units per time direction
  double dropout = 0.3;

  void validate() const;
};

// Location of one named tensor inside the flat parameter vector. Matrices are
// column-major, rows x cols.
struct TensorSlot {
  std::string name;
  std::size_t offset;
  std::size_t rows;
  std::size_t cols;
  std::size_t size() const noexcept { return rows * cols; }
};

// Stacked bidirectional LSTM with a sigmoid head. Each layer carries a
// forward-time and a backward-time cell; their hidden states are
// concatenated per period and fed to the next layer (or the head). Gate rows
// are ordered input, forget, output, candidate.
class BiLstmModel {
 public:
  BiLstmModel() : BiLstmModel(BiLstmConfig{}) {}
  explicit BiLstmModel(const BiLstmConfig& config);

  const BiLstmConfig& config() const noexcept { return config_; }
  const std::vector<TensorSlot>& tensors() const noexcept { return slots_; }

  std::vector<double>& params() noexcept { return params_; }
  const std::vector<double>& params() const noexcept { return params_; }
  std::size_t num_params() const noexcept { return params_.size(); }

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases except the
  // forget gate (1).
  void initialize(std::uint64_t seed);

  Standardizer standardizer;
  bool training_mode = false;

  // Slot indices of a layer's direction blocks: W (4H x in), U (4H x H), b (4H).
  struct DirectionSlots {
    std::size_t W, U, b;
  };
  DirectionSlots direction(std::size_t layer, bool backward) const;
  std::size_t head_weight_slot() const noexcept { return slots_.size() - 2; }
  std::size_t head_bias_slot() const noexcept { return slots_.size() - 1; }
  std::size_t layer_input_size(std::size_t layer) const noexcept {
    return layer == 0 ? config_.input_size : 2 * config_.width;
  }

  Eigen::Map<Eigen::MatrixXd> tensor(std::size_t slot);
  Eigen::Map<const Eigen::MatrixXd> tensor(std::size_t slot) const;

 private:
  BiLstmConfig config_;
  std::vector<TensorSlot> slots_;
  std::vector<double> params_;
};

// One training sample: standardized T x 4 features and the optimal setups.
struct Example {
  Eigen::MatrixXd features;
  std::vector<double> labels;
};

// Per-period probabilities. Dropout is applied only when the model is in
// training mode and a mask stream is supplied; otherwise the pass is
// deterministic.
std::vector<double> bilstm_forward(const BiLstmModel& model, const Eigen::MatrixXd& features,
                                   std::uint64_t* dropout_seed = nullptr);

// Standardizes raw instance features with the model's own statistics and
// runs an inference pass.
std::vector<double> predict_instance(const BiLstmModel& model, const Instance& inst);

inline constexpr double kProbClip = 1e-12;

// Mean binary cross-entropy over periods, with y_hat clipped to
// [1e-12, 1 - 1e-12].
double bce_loss(std::span<const double> y_star, std::span<const double> y_hat);

// Exact gradient of the mean per-example BCE over the batch. In training
// mode each example gets its own inverted-dropout masks drawn from
// (mask_seed, example index), so identical seeds reproduce identical masks.
// Returns the batch loss; `grad` is resized and overwritten.
double backprop(const BiLstmModel& model, std::span<const Example> batch,
                std::vector<double>& grad, std::uint64_t mask_seed = 0, std::size_t jobs = 1);

// Batch loss under the same masks backprop would draw.
double batch_loss(const BiLstmModel& model, std::span<const Example> batch,
                  std::uint64_t mask_seed = 0);

// Threshold at 0.5 with ties mapped to 1.
inline int threshold_label(double p) noexcept { return p >= 0.5 ? 1 : 0; }

}  // namespace lstmopt
