#include "nlsurr/pipeline.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "nlsurr/error.hpp"
#include "nlsurr/io.hpp"
#include "nlsurr/rng.hpp"

namespace nlsurr {

using nlohmann::json;

namespace {

void fail(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::Config, "invalid config field '" + field + "': " + why);
}

// Runs `fn`, prefixing any failure with the stage name.
template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage ") + name + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Io, std::string("stage ") + name + ": " + e.what());
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

StageSeeds StageSeeds::from_master(std::uint64_t master) {
  auto at = [&](Stage s) { return derive_seed(master, static_cast<std::uint64_t>(s)); };
  return {at(Stage::Generate), at(Stage::Surrogate), at(Stage::Split), at(Stage::Init),
          at(Stage::Shuffle)};
}

void RunConfig::validate() const {
  if (system == "record") {
    if (record_path.empty()) fail("record", "system 'record' needs a record path");
  } else {
    try {
      parse_system(system);
    } catch (const Error&) {
      fail("system", "unknown system '" + system + "'");
    }
  }
  if (length < 8) fail("L", "must be >= 8, got " + std::to_string(length));
  if (count < 1) fail("N", "must be >= 1");
  if (system == "ar1" && !(std::abs(alpha) < 1.0)) fail("ar_alpha", "must satisfy |alpha| < 1");
  if (!(dt_sample >= 0.0) || !std::isfinite(dt_sample)) fail("dt_sample", "must be >= 0");
  if (surrogate.max_iter < 1) fail("max_iter", "must be >= 1");
  if (!(surrogate.tolerance > 0.0)) fail("tolerance", "must be positive");
  if (filter) {
    try {
      filter->validate();
    } catch (const Error& e) {
      fail("filter", e.what());
    }
  }
  if (hidden < 1) fail("hidden", "must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) fail("lr", "must be positive");
  if (batch_size < 1) fail("batch_size", "must be >= 1");
  if (!(clip_norm >= 0.0)) fail("clip_norm", "must be >= 0");
  if (!(train_frac > 0.0 && train_frac < 1.0)) fail("train_frac", "must lie in (0, 1)");
  if (!(val_frac > 0.0 && val_frac < 1.0)) fail("val_frac", "must lie in (0, 1)");
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) fail("significance", "must lie in (0, 1)");
}

json RunConfig::to_json() const {
  json j;
  j["system"] = system;
  j["record"] = record_path;
  j["ar_alpha"] = alpha;
  j["dt_sample"] = dt_sample;
  j["L"] = length;
  j["N"] = count;
  j["surrogate"] = std::string(surrogate_algorithm_name(surrogate.algorithm));
  j["max_iter"] = surrogate.max_iter;
  j["tolerance"] = surrogate.tolerance;
  if (filter) {
    j["filter_cutoff_hz"] = filter->cutoff_hz;
    j["filter_sampling_rate_hz"] = filter->sampling_rate_hz;
    j["filter_zero_phase"] = filter->zero_phase;
  }
  j["hidden"] = hidden;
  j["epochs"] = epochs;
  j["lr"] = lr;
  j["batch_size"] = batch_size;
  j["clip_norm"] = clip_norm;
  j["train_frac"] = train_frac;
  j["val_frac"] = val_frac;
  j["significance"] = alpha_level;
  j["seed"] = seed;
  j["seed_generate"] = seeds.generate;
  j["seed_surrogate"] = seeds.surrogate;
  j["seed_split"] = seeds.split;
  j["seed_init"] = seeds.init;
  j["seed_shuffle"] = seeds.shuffle;
  return j;
}

void RunConfig::merge_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "system") system = value.get<std::string>();
      else if (key == "record") record_path = value.get<std::string>();
      else if (key == "ar_alpha") alpha = value.get<double>();
      else if (key == "dt_sample") dt_sample = value.get<double>();
      else if (key == "L") length = value.get<std::size_t>();
      else if (key == "N") count = value.get<std::size_t>();
      else if (key == "surrogate") surrogate.algorithm = parse_surrogate_algorithm(value.get<std::string>());
      else if (key == "max_iter") surrogate.max_iter = value.get<std::size_t>();
      else if (key == "tolerance") surrogate.tolerance = value.get<double>();
      else if (key == "filter_cutoff_hz") {
        if (!filter) filter.emplace();
        filter->cutoff_hz = value.get<double>();
      } else if (key == "filter_sampling_rate_hz") {
        if (!filter) filter.emplace();
        filter->sampling_rate_hz = value.get<double>();
      } else if (key == "filter_zero_phase") {
        if (!filter) filter.emplace();
        filter->zero_phase = value.get<bool>();
      }
      else if (key == "hidden") hidden = value.get<std::size_t>();
      else if (key == "epochs") epochs = value.get<std::size_t>();
      else if (key == "lr") lr = value.get<double>();
      else if (key == "batch_size") batch_size = value.get<std::size_t>();
      else if (key == "clip_norm") clip_norm = value.get<double>();
      else if (key == "train_frac") train_frac = value.get<double>();
      else if (key == "val_frac") val_frac = value.get<double>();
      else if (key == "significance") alpha_level = value.get<double>();
      else if (key == "seed") {
        seed = value.get<std::uint64_t>();
        seeds = StageSeeds::from_master(seed);
      } else if (key.rfind("seed_", 0) == 0) {
        // handled below so they override the derived values regardless of key order
      } else {
        throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
      }
    }
    if (j.contains("seed_generate")) seeds.generate = j["seed_generate"].get<std::uint64_t>();
    if (j.contains("seed_surrogate")) seeds.surrogate = j["seed_surrogate"].get<std::uint64_t>();
    if (j.contains("seed_split")) seeds.split = j["seed_split"].get<std::uint64_t>();
    if (j.contains("seed_init")) seeds.init = j["seed_init"].get<std::uint64_t>();
    if (j.contains("seed_shuffle")) seeds.shuffle = j["seed_shuffle"].get<std::uint64_t>();
    for (const auto& [key, value] : j.items()) {
      if (key.rfind("seed_", 0) == 0 && key != "seed_generate" && key != "seed_surrogate" &&
          key != "seed_split" && key != "seed_init" && key != "seed_shuffle")
        throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config type error: ") + e.what());
  }
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.merge_json(j);
  return c;
}

SystemSpec RunConfig::system_spec() const {
  SystemSpec spec;
  spec.system = parse_system(system);
  spec.noise.alpha = alpha;
  spec.dt_sample = dt_sample;
  return spec;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.hidden = hidden;
  t.epochs = epochs;
  t.batch_size = batch_size;
  t.adam.lr = lr;
  t.adam.clip_norm = clip_norm;
  t.init_seed = seeds.init;
  t.shuffle_seed = seeds.shuffle;
  return t;
}

json Verdict::to_json() const {
  json j;
  j["system"] = system;
  j["L"] = length;
  j["hidden"] = hidden;
  j["epochs"] = epochs;
  j["representative_epoch"] = representative_epoch;
  j["representative_accuracy"] = representative_accuracy;
  j["first_smoothed_accuracy"] = first_smoothed_accuracy;
  j["final_smoothed_accuracy"] = final_smoothed_accuracy;
  j["first_train_loss"] = first_train_loss;
  j["final_train_loss_mean10"] = final_train_loss_mean10;
  j["successes"] = test.successes;
  j["trials"] = test.trials;
  j["p0"] = test.p0;
  j["significance"] = test.alpha;
  j["p_value"] = test.p_value;
  j["reject"] = test.reject;
  return j;
}

Verdict make_verdict(const TrainReport& report, const std::string& system, std::size_t length,
                     double alpha_level) {
  Verdict v;
  v.system = system;
  v.length = length;
  v.hidden = report.config.hidden;
  v.epochs = report.epochs();
  if (report.epochs() == 0) throw Error(ErrorKind::Length, "report has no epochs");
  if (report.test_items == 0) throw Error(ErrorKind::Length, "report has no test items");
  v.representative_epoch = report.representative_epoch;
  v.representative_accuracy = report.representative_accuracy;
  v.first_smoothed_accuracy = report.test_acc_s5.front();
  v.final_smoothed_accuracy = report.test_acc_s5.back();
  v.first_train_loss = report.train_loss.front();
  const std::size_t tail = std::min<std::size_t>(10, report.epochs());
  double s = 0.0;
  for (std::size_t i = report.epochs() - tail; i < report.epochs(); ++i) s += report.train_loss[i];
  v.final_train_loss_mean10 = s / static_cast<double>(tail);
  const auto n = static_cast<std::uint64_t>(report.test_items);
  const auto k = static_cast<std::uint64_t>(
      std::llround(report.representative_accuracy * static_cast<double>(n)));
  v.test = binomial_test(std::min(k, n), n, 0.5, alpha_level);
  return v;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json realization_metadata(const RunConfig& config, const std::vector<TimeSeries>& realizations) {
  json j;
  j["system"] = config.system;
  const bool record = config.system == "record";
  j["mode"] = record ? "windowed" : "independent";
  j["L"] = config.length;
  j["N"] = realizations.size();
  j["seed"] = config.seeds.generate;
  json params = json::object();
  if (!realizations.empty()) {
    for (const auto& [name, value] : realizations.front().meta.params) {
      if (name == "x0" || name == "y0" || name == "start") continue;
      params[name] = value;
    }
    if (realizations.front().dt) j["dt"] = *realizations.front().dt;
    j["burn_in"] = realizations.front().meta.burn_in;
  }
  j["params"] = params;
  if (record) j["record"] = fs::path(config.record_path).filename().string();
  if (config.filter) {
    j["filter"] = {{"order", config.filter->order},
                   {"cutoff_hz", config.filter->cutoff_hz},
                   {"sampling_rate_hz", config.filter->sampling_rate_hz},
                   {"zero_phase", config.filter->zero_phase}};
  }
  return j;
}

json surrogate_report(const std::vector<TimeSeries>& originals,
                      const std::vector<SurrogateResult>& surrogates,
                      const SurrogateConfig& config) {
  json j;
  j["algorithm"] = std::string(surrogate_algorithm_name(config.algorithm));
  j["max_iter"] = config.max_iter;
  j["tolerance"] = config.tolerance;
  j["seed"] = config.seed;
  json rows = json::array();
  std::size_t converged = 0;
  for (std::size_t i = 0; i < surrogates.size(); ++i) {
    const auto& r = surrogates[i];
    converged += r.converged ? 1 : 0;
    rows.push_back({{"index", i},
                    {"discrepancy", number_or_null(surrogate_discrepancy(originals[i], r))},
                    {"iterations", r.iterations},
                    {"converged", r.converged}});
  }
  j["converged"] = converged;
  j["realizations"] = rows;
  return j;
}

json dataset_metadata(const LabeledDataset& dataset, const RunConfig& config) {
  json j;
  j["L"] = dataset.length;
  j["N"] = dataset.pair_count();
  const SplitCounts counts = split_counts(dataset.pair_count(), config.train_frac, config.val_frac);
  j["pairs"] = {{"train", counts.train}, {"validation", counts.validation}, {"test", counts.test}};
  j["seeds"] = {{"generate", config.seeds.generate},
                {"surrogate", config.seeds.surrogate},
                {"split", dataset.split_seed}};
  j["surrogate"] = {{"algorithm", std::string(surrogate_algorithm_name(dataset.surrogate.algorithm))},
                    {"max_iter", dataset.surrogate.max_iter},
                    {"tolerance", dataset.surrogate.tolerance},
                    {"seed", dataset.surrogate.seed}};
  j["standardization"] = "per-realization z-score";
  if (config.filter) {
    j["filter"] = {{"order", config.filter->order},
                   {"cutoff_hz", config.filter->cutoff_hz},
                   {"sampling_rate_hz", config.filter->sampling_rate_hz},
                   {"zero_phase", config.filter->zero_phase}};
  } else {
    j["filter"] = nullptr;
  }
  return j;
}

json report_metadata(const TrainReport& report) {
  const TrainConfig& c = report.config;
  json j;
  j["hidden"] = c.hidden;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["lr"] = c.adam.lr;
  j["beta1"] = c.adam.beta1;
  j["beta2"] = c.adam.beta2;
  j["epsilon"] = c.adam.epsilon;
  j["clip_norm"] = c.adam.clip_norm;
  j["seed_init"] = c.init_seed;
  j["seed_shuffle"] = c.shuffle_seed;
  j["test_items"] = report.test_items;
  j["smoothing_window"] = kSmoothingWindow;
  j["representative_epoch"] = report.representative_epoch;
  j["representative_accuracy"] = report.representative_accuracy;
  return j;
}

std::vector<TimeSeries> generate_stage(const RunConfig& config) {
  if (config.system == "record") {
    const TimeSeries record = load_series(config.record_path, SeriesFormat::Column);
    return prepare_record(record, config.length, config.count, config.seeds.generate,
                          config.filter);
  }
  return make_realizations(config.system_spec(), config.length, config.count,
                           config.seeds.generate);
}

PipelineResult run_pipeline(const RunConfig& config) {
  config.validate();
  const SplitCounts counts = split_counts(config.count, config.train_frac, config.val_frac);
  if (counts.train == 0 || counts.validation == 0 || counts.test == 0)
    throw Error(ErrorKind::Config, "invalid config field 'N': " + std::to_string(config.count) +
                                       " pairs leave an empty train, validation or test split");

  const fs::path& out = config.output_dir;
  const bool write = !out.empty();
  if (write) write_text(out / "config.json", dump_json(config.to_json()));

  PipelineResult result;
  result.realizations = stage("generate", [&] { return generate_stage(config); });
  if (write) {
    write_realizations_csv(out / "realizations.csv", result.realizations);
    write_text(out / "realizations.json",
               dump_json(realization_metadata(config, result.realizations)));
  }

  SurrogateConfig sc = config.surrogate;
  sc.seed = config.seeds.surrogate;
  const auto surrogates = stage("surrogate", [&] { return make_surrogates(result.realizations, sc); });
  if (write) {
    std::vector<TimeSeries> raw;
    raw.reserve(surrogates.size());
    for (const auto& s : surrogates) raw.push_back(s.surrogate);
    write_realizations_csv(out / "surrogates.csv", raw);
    write_text(out / "surrogates.json", dump_json(surrogate_report(result.realizations, surrogates, sc)));
  }

  result.dataset = stage("dataset", [&] {
    return split_dataset(pair_dataset(result.realizations, surrogates, sc), config.seeds.split,
                         config.train_frac, config.val_frac);
  });
  if (write) {
    write_dataset_csv(out / "dataset.csv", result.dataset);
    write_text(out / "dataset.json", dump_json(dataset_metadata(result.dataset, config)));
  }

  result.training = stage("train", [&] { return train(result.dataset, config.train_config()); });
  if (write) {
    write_text(out / "model.json", model_to_json(result.training.final_model));
    write_text(out / "model_representative.json", model_to_json(result.training.representative));
    write_report_csv(out / "report.csv", result.training.report);
    write_text(out / "report.json", dump_json(report_metadata(result.training.report)));
  }

  result.verdict = stage("report", [&] {
    return make_verdict(result.training.report, config.system, config.length, config.alpha_level);
  });
  if (write) write_text(out / "verdict.json", dump_json(result.verdict.to_json()));
  return result;
}

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("NLSURR_OUTPUT_ROOT"); env && *env) return env;
  return std::filesystem::current_path();
}

}  // namespace nlsurr
