#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsurr/dataset.hpp"
#include "nlsurr/dynsys.hpp"
#include "nlsurr/filter.hpp"
#include "nlsurr/stats.hpp"
#include "nlsurr/surrogate.hpp"
#include "nlsurr/train.hpp"

namespace nlsurr {

/// Stage indices for seed splitting: stage seed = derive_seed(master, index).
enum class Stage : std::uint64_t { Generate = 0, Surrogate = 1, Split = 2, Init = 3, Shuffle = 4 };

struct StageSeeds {
  std::uint64_t generate = 0;
  std::uint64_t surrogate = 0;
  std::uint64_t split = 0;
  std::uint64_t init = 0;
  std::uint64_t shuffle = 0;

  static StageSeeds from_master(std::uint64_t master);
};

/// Everything that determines a run. The output directory is where results go,
/// not what they contain, so it is left out of the frozen JSON.
struct RunConfig {
  std::string system = "logistic";  ///< a System name, or "record" for an external file
  std::string record_path;          ///< single-column record when system == "record"
  double alpha = 0.2;               ///< AR(1) coefficient for system == "ar1"
  double dt_sample = 0.0;           ///< flows only; 0 = per-system default
  std::size_t length = 32;
  std::size_t count = 1000;
  SurrogateConfig surrogate;
  std::optional<FilterSpec> filter;
  std::size_t hidden = 10;
  std::size_t epochs = 400;
  double lr = 1e-4;
  std::size_t batch_size = 16;
  double clip_norm = 5.0;
  double train_frac = 0.75;
  double val_frac = 0.30;
  double alpha_level = 0.05;
  std::uint64_t seed = 1;
  StageSeeds seeds = StageSeeds::from_master(1);
  std::filesystem::path output_dir;

  /// Throws Error(Config) naming the offending field.
  void validate() const;
  nlohmann::json to_json() const;
  /// Keys not present keep their current values; an explicit "seed" re-derives
  /// stage seeds unless those are also given.
  void merge_json(const nlohmann::json& j);
  static RunConfig from_json(const nlohmann::json& j);

  SystemSpec system_spec() const;
  TrainConfig train_config() const;
};

struct Verdict {
  std::string system;
  std::size_t length = 0;
  std::size_t hidden = 0;
  std::size_t epochs = 0;
  std::size_t representative_epoch = 0;
  double representative_accuracy = 0.0;
  double first_smoothed_accuracy = 0.0;
  double final_smoothed_accuracy = 0.0;
  double first_train_loss = 0.0;
  double final_train_loss_mean10 = 0.0;  ///< mean training loss over the last 10 epochs
  BinomialTestResult test;

  nlohmann::json to_json() const;
};

/// Builds the verdict from a finished report. Successes are the smoothed
/// accuracy times the test-item count, rounded to the nearest integer.
Verdict make_verdict(const TrainReport& report, const std::string& system, std::size_t length,
                     double alpha_level = 0.05);

/// Realizations for the configured source.
std::vector<TimeSeries> generate_stage(const RunConfig& config);

struct PipelineResult {
  std::vector<TimeSeries> realizations;
  LabeledDataset dataset;
  TrainResult training;
  Verdict verdict;
};

/// generate -> surrogate -> dataset -> train -> report. Writes every artifact to
/// config.output_dir when it is non-empty. A failing stage rethrows with its name.
PipelineResult run_pipeline(const RunConfig& config);

/// Default output root: $NLSURR_OUTPUT_ROOT, else the current directory.
std::filesystem::path default_output_root();

}  // namespace nlsurr

namespace nlsurr {

/// Stable JSON text: two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Sidecar for a realization CSV: system, params, seed, L, N, mode.
nlohmann::json realization_metadata(const RunConfig& config,
                                    const std::vector<TimeSeries>& realizations);

/// Per-realization discrepancy, iteration count and convergence flag.
nlohmann::json surrogate_report(const std::vector<TimeSeries>& originals,
                                const std::vector<SurrogateResult>& surrogates,
                                const SurrogateConfig& config);

nlohmann::json dataset_metadata(const LabeledDataset& dataset, const RunConfig& config);

/// Sidecar for a TrainReport CSV: hyperparameters, seeds, test-item count, representative epoch.
nlohmann::json report_metadata(const TrainReport& report);

}  // namespace nlsurr
