#include "nlsurr/train.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsurr/error.hpp"
#include "nlsurr/rng.hpp"
#include "nlsurr/stats.hpp"

namespace nlsurr {
namespace {

std::vector<Example> as_examples(const std::vector<const LabeledItem*>& items) {
  std::vector<Example> out;
  out.reserve(items.size());
  for (const auto* item : items) out.push_back({item->values, item->label});
  return out;
}

}  // namespace

void TrainReport::finalize() {
  train_loss_s5 = smooth(train_loss, kSmoothingWindow);
  val_loss_s5 = smooth(val_loss, kSmoothingWindow);
  test_acc_s5 = smooth(test_acc, kSmoothingWindow);
  if (train_loss.empty()) {
    representative_epoch = 0;
    representative_accuracy = 0.0;
    return;
  }
  const Representative rep = nlsurr::representative_accuracy(*this);
  representative_epoch = rep.epoch;
  representative_accuracy = rep.accuracy;
}

double evaluate(const RnnModel& model, const std::vector<const LabeledItem*>& items) {
  if (items.empty()) throw Error(ErrorKind::Length, "evaluate: no items");
  std::size_t correct = 0;
  for (const auto* item : items) {
    const bool predicted_original = predict(model, item->values) >= 0.5;
    if (predicted_original == (item->label == kLabelOriginal)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(items.size());
}

double evaluate(const RnnModel& model, const std::vector<LabeledItem>& items) {
  std::vector<const LabeledItem*> ptrs;
  ptrs.reserve(items.size());
  for (const auto& item : items) ptrs.push_back(&item);
  return evaluate(model, ptrs);
}

TrainResult train(const LabeledDataset& dataset, const TrainConfig& config) {
  if (config.batch_size == 0) throw Error(ErrorKind::Parameter, "batch size must be >= 1");
  const auto train_items = as_examples(dataset.select(Split::Train));
  const auto val_items = as_examples(dataset.select(Split::Validation));
  const auto test_ptrs = dataset.select(Split::Test);
  if (train_items.empty() || val_items.empty() || test_ptrs.empty())
    throw Error(ErrorKind::Split, "training needs nonempty train, validation and test splits");

  TrainResult result;
  result.initial = init_model(config.hidden, config.init_seed);
  RnnModel model = result.initial;
  AdamState adam(config.hidden);
  Rng rng = make_rng(config.shuffle_seed);

  TrainReport& report = result.report;
  report.config = config;
  report.test_items = test_ptrs.size();

  std::vector<std::size_t> order(train_items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<RnnModel> snapshots;
  snapshots.reserve(config.epochs);
  std::vector<Example> batch;
  batch.reserve(config.batch_size);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(uniform_index(rng, i))]);

    double loss_sum = 0.0;
    try {
      for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
        batch.clear();
        const std::size_t stop = std::min(order.size(), start + config.batch_size);
        for (std::size_t i = start; i < stop; ++i) batch.push_back(train_items[order[i]]);
        auto [grad, loss] = bptt_gradients(model, batch);
        loss_sum += loss * static_cast<double>(batch.size());
        adam_step(model, std::move(grad), adam, config.adam);
      }
    } catch (const Error& e) {
      throw Error(ErrorKind::Training,
                  "training diverged in epoch " + std::to_string(epoch) + ": " + e.what());
    }
    const double train_loss = loss_sum / static_cast<double>(train_items.size());
    if (!std::isfinite(train_loss))
      throw Error(ErrorKind::Training, "training loss is non-finite in epoch " +
                                           std::to_string(epoch));
    double val_loss = 0.0;
    double acc = 0.0;
    try {
      val_loss = batch_loss(model, val_items);
      acc = evaluate(model, test_ptrs);
    } catch (const Error& e) {
      throw Error(ErrorKind::Training,
                  "evaluation failed after epoch " + std::to_string(epoch) + ": " + e.what());
    }
    report.train_loss.push_back(train_loss);
    report.val_loss.push_back(val_loss);
    report.test_acc.push_back(acc);
    snapshots.push_back(model);
  }

  report.finalize();
  result.final_model = model;
  result.representative =
      report.representative_epoch == 0 ? result.initial : snapshots[report.representative_epoch - 1];
  return result;
}

}  // namespace nlsurr
