#include "lstmopt/bilstm.hpp"

#include <algorithm>
#include <cmath>

#include "lstmopt/errors.hpp"
#include "lstmopt/parallel.hpp"
#include "lstmopt/random.hpp"

namespace lstmopt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void BiLstmConfig::validate() const {
  if (input_size == 0) throw ModelError("BiLSTM input size must be positive");
  if (layers == 0) throw ModelError("BiLSTM needs at least one layer");
  if (width == 0) throw ModelError("BiLSTM width must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ModelError("dropout rate must be in [0, 1)");
}

BiLstmModel::BiLstmModel(const BiLstmConfig& config) : config_(config) {
  config_.validate();
  const std::size_t h = config_.width;
  std::size_t offset = 0;
  auto add = [&](std::string name, std::size_t rows, std::size_t cols) {
    slots_.push_back({std::move(name), offset, rows, cols});
    offset += rows * cols;
  };
  for (std::size_t l = 0; l < config_.layers; ++l) {
    for (const char* dir : {"fwd", "bwd"}) {
      const std::string prefix = "layer" + std::to_string(l) + "." + dir + ".";
      add(prefix + "W", 4 * h, layer_input_size(l));
      add(prefix + "U", 4 * h, h);
      add(prefix + "b", 4 * h, 1);
    }
  }
  add("head.w", 2 * h, 1);
  add("head.b", 1, 1);
  params_.assign(offset, 0.0);
}

BiLstmModel::DirectionSlots BiLstmModel::direction(std::size_t layer, bool backward) const {
  const std::size_t base = layer * 6 + (backward ? 3 : 0);
  return {base, base + 1, base + 2};
}

Eigen::Map<MatrixXd> BiLstmModel::tensor(std::size_t slot) {
  const TensorSlot& s = slots_.at(slot);
  return {params_.data() + s.offset, static_cast<Index>(s.rows), static_cast<Index>(s.cols)};
}

Eigen::Map<const MatrixXd> BiLstmModel::tensor(std::size_t slot) const {
  const TensorSlot& s = slots_.at(slot);
  return {params_.data() + s.offset, static_cast<Index>(s.rows), static_cast<Index>(s.cols)};
}

void BiLstmModel::initialize(std::uint64_t seed) {
  CounterRng rng({seed, 0x11571u});
  const auto h = static_cast<Index>(config_.width);
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    auto m = tensor(i);
    const bool bias = slots_[i].cols == 1 && slots_[i].name.back() == 'b';
    if (bias) {
      m.setZero();
      if (slots_[i].name != "head.b") m.block(h, 0, h, 1).setOnes();
      continue;
    }
    const double fan_in = slots_[i].name == "head.w" ? static_cast<double>(slots_[i].rows)
                                                     : static_cast<double>(slots_[i].cols);
    const double k = 1.0 / std::sqrt(fan_in);
    for (Index j = 0; j < m.size(); ++j) m.data()[j] = rng.uniform(-k, k);
  }
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct DirectionCache {
  MatrixXd gates;   // 4H x T, post-activation
  MatrixXd cell;    // H x T
  MatrixXd tanh_c;  // H x T
  MatrixXd hidden;  // H x T
};

struct LayerCache {
  MatrixXd input;  // in x T
  DirectionCache fwd, bwd;
  MatrixXd mask;    // 2H x T scale factors; empty when dropout is off
  MatrixXd output;  // 2H x T after dropout
};

struct Pass {
  std::vector<LayerCache> layers;
  VectorXd logits;
  std::vector<double> probs;
};

void run_direction(const BiLstmModel& model, std::size_t layer, bool backward,
                   const MatrixXd& input, DirectionCache& cache) {
  const auto slots = model.direction(layer, backward);
  const auto W = model.tensor(slots.W);
  const auto U = model.tensor(slots.U);
  const auto b = model.tensor(slots.b);
  const Index h = static_cast<Index>(model.config().width);
  const Index n = input.cols();
  cache.gates.noalias() = W * input;
  cache.gates.colwise() += b.col(0);
  cache.cell.resize(h, n);
  cache.tanh_c.resize(h, n);
  cache.hidden.resize(h, n);
  VectorXd h_prev = VectorXd::Zero(h);
  VectorXd c_prev = VectorXd::Zero(h);
  VectorXd a(4 * h);
  for (Index step = 0; step < n; ++step) {
    const Index t = backward ? n - 1 - step : step;
    a.noalias() = cache.gates.col(t) + U * h_prev;
    for (Index k = 0; k < 3 * h; ++k) a[k] = sigmoid(a[k]);
    for (Index k = 3 * h; k < 4 * h; ++k) a[k] = std::tanh(a[k]);
    cache.gates.col(t) = a;
    auto i = a.segment(0, h).array();
    auto f = a.segment(h, h).array();
    auto o = a.segment(2 * h, h).array();
    auto g = a.segment(3 * h, h).array();
    c_prev = (f * c_prev.array() + i * g).matrix();
    cache.cell.col(t) = c_prev;
    cache.tanh_c.col(t) = c_prev.array().tanh().matrix();
    h_prev = (o * cache.tanh_c.col(t).array()).matrix();
    cache.hidden.col(t) = h_prev;
  }
}

MatrixXd sample_mask(Index rows, Index cols, double rate, std::uint64_t seed, std::size_t example,
                     std::size_t layer) {
  CounterRng rng({seed, static_cast<std::uint64_t>(example), static_cast<std::uint64_t>(layer)});
  const double keep_scale = 1.0 / (1.0 - rate);
  MatrixXd m(rows, cols);
  for (Index j = 0; j < m.size(); ++j) m.data()[j] = rng.uniform01() < rate ? 0.0 : keep_scale;
  return m;
}

void check_features(const BiLstmModel& model, const MatrixXd& features) {
  if (features.rows() == 0) throw ModelError("BiLSTM input must have at least one period");
  if (features.cols() != static_cast<Index>(model.config().input_size)) {
    throw ModelError("BiLSTM input has " + std::to_string(features.cols()) +
                     " features, model expects " + std::to_string(model.config().input_size));
  }
}

// dropout_seed/example select the mask stream; masks are used iff `dropout`.
Pass forward_pass(const BiLstmModel& model, const MatrixXd& features, bool dropout,
                  std::uint64_t mask_seed, std::size_t example) {
  check_features(model, features);
  const auto& cfg = model.config();
  const Index h = static_cast<Index>(cfg.width);
  const Index n = features.rows();
  Pass pass;
  pass.layers.resize(cfg.layers);
  MatrixXd input = features.transpose();
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    LayerCache& lc = pass.layers[l];
    lc.input = std::move(input);
    run_direction(model, l, false, lc.input, lc.fwd);
    run_direction(model, l, true, lc.input, lc.bwd);
    lc.output.resize(2 * h, n);
    lc.output.topRows(h) = lc.fwd.hidden;
    lc.output.bottomRows(h) = lc.bwd.hidden;
    if (dropout && cfg.dropout > 0.0) {
      lc.mask = sample_mask(2 * h, n, cfg.dropout, mask_seed, example, l);
      lc.output.array() *= lc.mask.array();
    }
    input = lc.output;
  }
  const auto w = model.tensor(model.head_weight_slot());
  const double b = model.tensor(model.head_bias_slot())(0, 0);
  pass.logits = (w.transpose() * pass.layers.back().output).transpose();
  pass.logits.array() += b;
  pass.probs.resize(static_cast<std::size_t>(n));
  for (Index t = 0; t < n; ++t) pass.probs[static_cast<std::size_t>(t)] = sigmoid(pass.logits[t]);
  return pass;
}

// Accumulates d(loss)/d(params) for one example into grad, where the
// per-period logit gradients are dlogits.
void backward_pass(const BiLstmModel& model, const Pass& pass, const VectorXd& dlogits,
                   std::vector<double>& grad) {
  const auto& cfg = model.config();
  const Index h = static_cast<Index>(cfg.width);
  auto grad_map = [&](std::size_t slot) {
    const TensorSlot& s = model.tensors()[slot];
    return Eigen::Map<MatrixXd>(grad.data() + s.offset, static_cast<Index>(s.rows),
                                static_cast<Index>(s.cols));
  };
  const auto w = model.tensor(model.head_weight_slot());
  grad_map(model.head_weight_slot()).col(0).noalias() += pass.layers.back().output * dlogits;
  grad_map(model.head_bias_slot())(0, 0) += dlogits.sum();

  MatrixXd d_out = w.col(0) * dlogits.transpose();  // 2H x T
  for (std::size_t l = cfg.layers; l-- > 0;) {
    const LayerCache& lc = pass.layers[l];
    if (lc.mask.size() != 0) d_out.array() *= lc.mask.array();
    const Index n = lc.input.cols();
    MatrixXd d_in = MatrixXd::Zero(lc.input.rows(), n);
    for (bool backward : {false, true}) {
      const DirectionCache& dc = backward ? lc.bwd : lc.fwd;
      const auto slots = model.direction(l, backward);
      const auto W = model.tensor(slots.W);
      const auto U = model.tensor(slots.U);
      const auto dH = d_out.middleRows(backward ? h : 0, h);
      MatrixXd dA(4 * h, n);
      MatrixXd h_prev_all = MatrixXd::Zero(h, n);
      VectorXd dh_next = VectorXd::Zero(h);
      VectorXd dc_next = VectorXd::Zero(h);
      for (Index step = n; step-- > 0;) {
        const Index t = backward ? n - 1 - step : step;
        const bool first = step == 0;
        const Index t_prev = backward ? t + 1 : t - 1;
        const auto gates = dc.gates.col(t);
        const auto i = gates.segment(0, h).array();
        const auto f = gates.segment(h, h).array();
        const auto o = gates.segment(2 * h, h).array();
        const auto g = gates.segment(3 * h, h).array();
        const auto tc = dc.tanh_c.col(t).array();
        const VectorXd dh = dH.col(t) + dh_next;
        const auto dha = dh.array();
        const VectorXd dcell = (dha * o * (1.0 - tc.square()) + dc_next.array()).matrix();
        const auto dca = dcell.array();
        VectorXd c_prev = VectorXd::Zero(h);
        if (!first) c_prev = dc.cell.col(t_prev);
        if (!first) h_prev_all.col(t) = dc.hidden.col(t_prev);
        auto da = dA.col(t);
        da.segment(0, h) = (dca * g * i * (1.0 - i)).matrix();
        da.segment(h, h) = (dca * c_prev.array() * f * (1.0 - f)).matrix();
        da.segment(2 * h, h) = (dha * tc * o * (1.0 - o)).matrix();
        da.segment(3 * h, h) = (dca * i * (1.0 - g.square())).matrix();
        dc_next = (dca * f).matrix();
        dh_next.noalias() = U.transpose() * da;
      }
      grad_map(slots.W).noalias() += dA * lc.input.transpose();
      grad_map(slots.U).noalias() += dA * h_prev_all.transpose();
      grad_map(slots.b).col(0) += dA.rowwise().sum();
      d_in.noalias() += W.transpose() * dA;
    }
    d_out = std::move(d_in);
  }
}

// Per-example loss and logit gradient of the clipped mean BCE.
double example_loss_grad(const std::vector<double>& probs, const std::vector<double>& labels,
                         VectorXd* dlogits) {
  const std::size_t n = probs.size();
  double loss = 0.0;
  if (dlogits) dlogits->resize(static_cast<Index>(n));
  for (std::size_t t = 0; t < n; ++t) {
    const double raw = probs[t];
    const double p = std::clamp(raw, kProbClip, 1.0 - kProbClip);
    loss -= labels[t] * std::log(p) + (1.0 - labels[t]) * std::log(1.0 - p);
    if (dlogits) {
      const bool clipped = raw < kProbClip || raw > 1.0 - kProbClip;
      (*dlogits)[static_cast<Index>(t)] = clipped ? 0.0 : (raw - labels[t]) / static_cast<double>(n);
    }
  }
  return loss / static_cast<double>(n);
}

void check_example(const BiLstmModel& model, const Example& ex) {
  check_features(model, ex.features);
  if (ex.labels.size() != static_cast<std::size_t>(ex.features.rows())) {
    throw ModelError("example labels do not match horizon");
  }
}

}  // namespace

std::vector<double> bilstm_forward(const BiLstmModel& model, const MatrixXd& features,
                                   std::uint64_t* dropout_seed) {
  const bool dropout = model.training_mode && dropout_seed != nullptr;
  const std::uint64_t seed = dropout ? (*dropout_seed)++ : 0;
  return forward_pass(model, features, dropout, seed, 0).probs;
}

std::vector<double> predict_instance(const BiLstmModel& model, const Instance& inst) {
  return bilstm_forward(model, model.standardizer.transform(instance_features(inst)));
}

double bce_loss(std::span<const double> y_star, std::span<const double> y_hat) {
  if (y_star.size() != y_hat.size()) throw DimensionError("bce_loss: length mismatch");
  if (y_star.empty()) throw DimensionError("bce_loss: empty vectors");
  std::vector<double> probs(y_hat.begin(), y_hat.end());
  std::vector<double> labels(y_star.begin(), y_star.end());
  return example_loss_grad(probs, labels, nullptr);
}

double backprop(const BiLstmModel& model, std::span<const Example> batch,
                std::vector<double>& grad, std::uint64_t mask_seed, std::size_t jobs) {
  if (batch.empty()) throw ModelError("backprop: empty batch");
  for (const auto& ex : batch) check_example(model, ex);
  const bool dropout = model.training_mode;
  // Fixed chunking keeps the reduction order independent of `jobs`.
  constexpr std::size_t kChunk = 8;
  const std::size_t chunks = (batch.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(model.num_params(), 0.0));
  std::vector<double> losses(batch.size(), 0.0);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::size_t end = std::min(batch.size(), (c + 1) * kChunk);
    VectorXd dlogits;
    for (std::size_t e = c * kChunk; e < end; ++e) {
      const Pass pass = forward_pass(model, batch[e].features, dropout, mask_seed, e);
      losses[e] = example_loss_grad(pass.probs, batch[e].labels, &dlogits);
      backward_pass(model, pass, dlogits, partial[c]);
    }
  });
  grad.assign(model.num_params(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += p[k];
  }
  for (double& g : grad) g *= scale;
  double loss = 0.0;
  for (double l : losses) loss += l;
  return loss * scale;
}

double batch_loss(const BiLstmModel& model, std::span<const Example> batch,
                  std::uint64_t mask_seed) {
  if (batch.empty()) throw ModelError("batch_loss: empty batch");
  double loss = 0.0;
  for (std::size_t e = 0; e < batch.size(); ++e) {
    check_example(model, batch[e]);
    const Pass pass = forward_pass(model, batch[e].features, model.training_mode, mask_seed, e);
    loss += example_loss_grad(pass.probs, batch[e].labels, nullptr);
  }
  return loss / static_cast<double>(batch.size());
}

}  // namespace lstmopt
