#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nlsurr/filter.hpp"
#include "nlsurr/surrogate.hpp"
#include "nlsurr/time_series.hpp"

namespace nlsurr {

enum class Split { Train, Validation, Test };
std::string_view split_name(Split split) noexcept;
Split parse_split(std::string_view name);

inline constexpr int kLabelOriginal = 1;
inline constexpr int kLabelSurrogate = 0;

struct LabeledItem {
  std::size_t pair_id = 0;
  int label = kLabelOriginal;
  Split split = Split::Train;
  std::vector<double> values;
};

struct SurrogateStats {
  double discrepancy = 0.0;  ///< final spectral discrepancy (NaN when undefined)
  std::size_t iterations = 0;
  bool converged = false;
};

/// Items come in pairs: index 2p is the original of pair p, 2p + 1 its surrogate.
struct LabeledDataset {
  std::vector<LabeledItem> items;
  std::size_t length = 0;
  SurrogateConfig surrogate;
  std::uint64_t split_seed = 0;
  std::vector<SurrogateStats> surrogate_stats;  ///< one per pair, when built here

  std::size_t pair_count() const noexcept { return items.size() / 2; }
  std::vector<const LabeledItem*> select(Split split) const;
};

/// Zero mean, unit population variance; constant input maps to zeros. Mean and
/// variance are accumulated over the sorted values, so two series with the same
/// multiset get bit-identical scaling.
std::vector<double> standardize(std::span<const double> values);
TimeSeries standardize(const TimeSeries& series);

/// Best IAAFT discrepancy, or spectral_discrepancy for the other algorithms
/// (NaN for a zero-energy original).
double surrogate_discrepancy(const TimeSeries& original, const SurrogateResult& result);

/// One surrogate per original, realization i drawn from stream derive_seed(config.seed, i).
/// Failures are rethrown with the pair index.
std::vector<SurrogateResult> make_surrogates(const std::vector<TimeSeries>& originals,
                                             const SurrogateConfig& config);

/// Labels and standardizes precomputed (original, surrogate) pairs. All items start in Train.
LabeledDataset pair_dataset(const std::vector<TimeSeries>& originals,
                            const std::vector<SurrogateResult>& surrogates,
                            const SurrogateConfig& config);

/// make_surrogates followed by pair_dataset.
LabeledDataset build_dataset(const std::vector<TimeSeries>& originals,
                             const SurrogateConfig& config);

struct SplitCounts {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

/// Pair counts per split: test = floor(test_frac * P), validation = floor(val_frac * pool).
SplitCounts split_counts(std::size_t pairs, double train_frac = 0.75,
                         double val_frac_of_train = 0.30);

/// Assigns whole pairs to splits by a seeded permutation. Throws Error(Split) below 3 pairs.
LabeledDataset split_dataset(LabeledDataset dataset, std::uint64_t seed,
                             double train_frac = 0.75, double val_frac_of_train = 0.30);

/// Windows of a long record, optionally low-pass filtered first.
std::vector<TimeSeries> prepare_record(const TimeSeries& record, std::size_t length,
                                       std::size_t count, std::uint64_t seed,
                                       const std::optional<FilterSpec>& filter);

}  // namespace nlsurr
