#include "nlsurr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nlsurr/dynsys.hpp"
#include "nlsurr/error.hpp"
#include "nlsurr/rng.hpp"

namespace nlsurr {

std::string_view split_name(Split split) noexcept {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "unknown";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "validation") return Split::Validation;
  if (name == "test") return Split::Test;
  throw Error(ErrorKind::Parse, "unknown split '" + std::string(name) + "'");
}

std::vector<const LabeledItem*> LabeledDataset::select(Split split) const {
  std::vector<const LabeledItem*> out;
  for (const auto& item : items)
    if (item.split == split) out.push_back(&item);
  return out;
}

std::vector<double> standardize(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sorted) var += (v - mean) * (v - mean);
  var /= n;
  const double sd = std::sqrt(var);

  std::vector<double> out(values.size(), 0.0);
  if (!(sd > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
  return out;
}

TimeSeries standardize(const TimeSeries& series) {
  if (series.size() < 2) throw Error(ErrorKind::Length, "standardize needs at least 2 samples");
  TimeSeries out = series;
  out.samples = standardize(series.samples);
  return out;
}

double surrogate_discrepancy(const TimeSeries& original, const SurrogateResult& result) {
  if (!result.discrepancy_trace.empty())
    return *std::min_element(result.discrepancy_trace.begin(), result.discrepancy_trace.end());
  try {
    return spectral_discrepancy(original.samples, result.surrogate.samples);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Normalization) throw;
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<SurrogateResult> make_surrogates(const std::vector<TimeSeries>& originals,
                                             const SurrogateConfig& config) {
  config.validate();
  std::vector<SurrogateResult> out;
  out.reserve(originals.size());
  for (std::size_t pair = 0; pair < originals.size(); ++pair) {
    SurrogateConfig pair_config = config;
    pair_config.seed = derive_seed(config.seed, pair);
    try {
      out.push_back(make_surrogate(originals[pair], pair_config));
    } catch (const Error& e) {
      throw Error(e.kind(), "surrogate for pair " + std::to_string(pair) + ": " + e.what());
    }
  }
  return out;
}

LabeledDataset pair_dataset(const std::vector<TimeSeries>& originals,
                            const std::vector<SurrogateResult>& surrogates,
                            const SurrogateConfig& config) {
  if (originals.size() != surrogates.size())
    throw Error(ErrorKind::Length, "one surrogate per original is required");
  LabeledDataset ds;
  ds.surrogate = config;
  if (originals.empty()) return ds;
  ds.length = originals.front().size();
  ds.items.reserve(2 * originals.size());
  ds.surrogate_stats.reserve(originals.size());

  for (std::size_t pair = 0; pair < originals.size(); ++pair) {
    const TimeSeries& original = originals[pair];
    const SurrogateResult& result = surrogates[pair];
    if (original.size() != ds.length || result.surrogate.size() != ds.length)
      throw Error(ErrorKind::Length, "pair " + std::to_string(pair) + " has length " +
                                         std::to_string(original.size()) + ", expected " +
                                         std::to_string(ds.length));
    if (ds.length < 2) throw Error(ErrorKind::Length, "realizations need at least 2 samples");
    SurrogateStats stats;
    stats.iterations = result.iterations;
    stats.converged = result.converged;
    stats.discrepancy = surrogate_discrepancy(original, result);
    ds.surrogate_stats.push_back(stats);

    ds.items.push_back({pair, kLabelOriginal, Split::Train, standardize(original.samples)});
    ds.items.push_back(
        {pair, kLabelSurrogate, Split::Train, standardize(result.surrogate.samples)});
  }
  return ds;
}

LabeledDataset build_dataset(const std::vector<TimeSeries>& originals,
                             const SurrogateConfig& config) {
  return pair_dataset(originals, make_surrogates(originals, config), config);
}

SplitCounts split_counts(std::size_t pairs, double train_frac, double val_frac_of_train) {
  SplitCounts c;
  c.test = static_cast<std::size_t>(std::floor((1.0 - train_frac) * static_cast<double>(pairs) + 1e-9));
  const std::size_t pool = pairs - c.test;
  c.validation = static_cast<std::size_t>(std::floor(val_frac_of_train * static_cast<double>(pool) + 1e-9));
  c.train = pool - c.validation;
  return c;
}

LabeledDataset split_dataset(LabeledDataset dataset, std::uint64_t seed, double train_frac,
                             double val_frac_of_train) {
  if (dataset.items.empty()) throw Error(ErrorKind::Split, "cannot split an empty dataset");
  if (!(train_frac > 0.0 && train_frac <= 1.0) ||
      !(val_frac_of_train >= 0.0 && val_frac_of_train < 1.0))
    throw Error(ErrorKind::Split, "split fractions out of range");
  const std::size_t pairs = dataset.pair_count();
  if (pairs < 3)
    throw Error(ErrorKind::Split,
                "need at least 3 pairs to split, got " + std::to_string(pairs));

  std::vector<std::size_t> ids(pairs);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  Rng rng = make_rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i)
    std::swap(ids[i - 1], ids[static_cast<std::size_t>(uniform_index(rng, i))]);

  const SplitCounts counts = split_counts(pairs, train_frac, val_frac_of_train);
  std::vector<Split> assignment(pairs, Split::Train);
  for (std::size_t i = 0; i < counts.test; ++i) assignment[ids[i]] = Split::Test;
  for (std::size_t i = counts.test; i < counts.test + counts.validation; ++i)
    assignment[ids[i]] = Split::Validation;

  for (auto& item : dataset.items) item.split = assignment.at(item.pair_id);
  dataset.split_seed = seed;
  return dataset;
}

std::vector<TimeSeries> prepare_record(const TimeSeries& record, std::size_t length,
                                       std::size_t count, std::uint64_t seed,
                                       const std::optional<FilterSpec>& filter) {
  check_series(record);
  if (filter) return make_windows(butterworth_lowpass(record, *filter), length, count, seed);
  return make_windows(record, length, count, seed);
}

}  // namespace nlsurr
