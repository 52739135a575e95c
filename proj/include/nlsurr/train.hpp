#pragma once

#include <cstdint>
#include <vector>

#include "nlsurr/dataset.hpp"
#include "nlsurr/rnn.hpp"

namespace nlsurr {

inline constexpr std::size_t kSmoothingWindow = 5;

struct TrainConfig {
  std::size_t hidden = 10;
  std::size_t epochs = 400;
  std::size_t batch_size = 16;
  AdamConfig adam;
  std::uint64_t init_seed = 0;
  std::uint64_t shuffle_seed = 0;
};

struct TrainReport {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::vector<double> test_acc;
  std::vector<double> train_loss_s5;
  std::vector<double> val_loss_s5;
  std::vector<double> test_acc_s5;
  std::size_t representative_epoch = 0;  ///< 1-based; 0 when there are no epochs
  double representative_accuracy = 0.0;
  std::size_t test_items = 0;
  TrainConfig config;

  std::size_t epochs() const noexcept { return train_loss.size(); }
  /// Recomputes the smoothed curves and the representative epoch.
  void finalize();
};

struct TrainResult {
  RnnModel initial;
  RnnModel final_model;
  RnnModel representative;  ///< snapshot after the representative epoch
  TrainReport report;
};

/// Mini-batch Adam on the Train split; the Validation split only feeds the loss
/// curve. Throws Error(Training) naming the epoch if the loss becomes non-finite.
TrainResult train(const LabeledDataset& dataset, const TrainConfig& config);

/// Fraction of items whose prediction (p >= 0.5) agrees with (label == 1).
double evaluate(const RnnModel& model, const std::vector<const LabeledItem*>& items);
double evaluate(const RnnModel& model, const std::vector<LabeledItem>& items);

}  // namespace nlsurr
