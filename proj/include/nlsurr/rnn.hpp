#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace nlsurr {

/// Single-hidden-layer Elman network with one scalar input per step, ReLU
/// hidden units and a sigmoid output read from the last hidden state.
/// The same layout is used for gradients and Adam moments.
struct RnnModel {
  std::size_t hidden = 0;
  std::vector<double> w_in;    ///< H
  std::vector<double> w_rec;   ///< H x H, row-major: w_rec[i * H + j] maps h_j to unit i
  std::vector<double> b_h;     ///< H
  std::vector<double> w_out;   ///< H
  double b_out = 0.0;

  RnnModel() = default;
  explicit RnnModel(std::size_t hidden_size);

  std::size_t parameter_count() const noexcept;

  /// Flattened view order: w_in, w_rec, b_h, w_out, b_out.
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);

  bool operator==(const RnnModel&) const = default;
};

/// Uniform in [-1/sqrt(H), 1/sqrt(H)] for all weights, zero biases.
RnnModel init_model(std::size_t hidden, std::uint64_t seed);

struct ForwardTrace {
  std::vector<double> pre;     ///< L x H pre-activations
  std::vector<double> hidden;  ///< (L + 1) x H, row 0 is h_0 = 0
  double logit = 0.0;
  double probability = 0.5;
};

double sigmoid(double z) noexcept;

/// Throws Error(Numeric) naming the step if an activation becomes non-finite.
ForwardTrace rnn_forward(const RnnModel& model, std::span<const double> sequence);
double predict(const RnnModel& model, std::span<const double> sequence);

inline constexpr double kProbabilityClamp = 1e-12;

/// Binary cross-entropy with p clamped to [1e-12, 1 - 1e-12].
double bce_loss(double p, int label) noexcept;

struct Example {
  std::span<const double> sequence;
  int label = 0;
};

/// Mean-over-batch BCE gradient via backpropagation through time, plus the mean loss.
/// Throws Error(Length) on an empty batch and Error(Numeric) on a non-finite gradient.
std::pair<RnnModel, double> bptt_gradients(const RnnModel& model, std::span<const Example> batch);

/// Mean loss without gradients.
double batch_loss(const RnnModel& model, std::span<const Example> batch);

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 5.0;  ///< global-norm clipping threshold, <= 0 disables
};

struct AdamState {
  RnnModel m;
  RnnModel v;
  std::uint64_t t = 0;

  AdamState() = default;
  explicit AdamState(std::size_t hidden) : m(hidden), v(hidden) {}
};

/// Clips `grad` to the configured global norm, then applies one bias-corrected
/// Adam update to `model`.
void adam_step(RnnModel& model, RnnModel grad, AdamState& state, const AdamConfig& config);

double global_norm(const RnnModel& grad) noexcept;

}  // namespace nlsurr
