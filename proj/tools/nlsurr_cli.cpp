// nlsurr: generate chaotic/noise realizations, build surrogate datasets, train the
// RNN discriminator and report the binomial verdict.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlsurr/dataset.hpp"
#include "nlsurr/error.hpp"
#include "nlsurr/io.hpp"
#include "nlsurr/pipeline.hpp"
#include "nlsurr/stats.hpp"

namespace {

using nlohmann::json;
using namespace nlsurr;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::Config: return 2;
    case ErrorKind::Parse:
    case ErrorKind::Io: return 3;
    case ErrorKind::Parameter:
    case ErrorKind::Length:
    case ErrorKind::Design:
    case ErrorKind::Split: return 4;
    default: return 5;
  }
}

// Flag values are collected as config keys and merged over the --config file,
// giving flag > file > default precedence.
struct ConfigFlags {
  std::string config_file;
  std::string out;
  json overrides = json::object();

  template <class T>
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<T>(flag, [this, key](const T& v) { overrides[key] = v; }, help);
  }

  RunConfig resolve(const char* subcommand) const {
    RunConfig cfg;
    if (!config_file.empty()) {
      json file;
      try {
        file = json::parse(read_text(config_file));
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, config_file + ": " + e.what());
      }
      cfg.merge_json(file);
    }
    cfg.merge_json(overrides);
    cfg.output_dir = out.empty() ? default_output_root() / subcommand : fs::path(out);
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App* app, ConfigFlags& f) {
  app->add_option("--config", f.config_file, "JSON config file (flat keys)");
  app->add_option("--out", f.out, "output directory (default $NLSURR_OUTPUT_ROOT/<command>)");
  f.add<std::uint64_t>(app, "--seed", "seed", "master seed");
}

void add_generate_flags(CLI::App* app, ConfigFlags& f) {
  f.add<std::string>(app, "--system", "system",
                     "logistic | henon | lorenz | rossler | chua | ar1 | record");
  f.add<std::string>(app, "--record", "record", "single-column record (implies --system record)");
  f.add<std::size_t>(app, "--L", "L", "realization length");
  f.add<std::size_t>(app, "--N", "N", "number of realizations");
  f.add<double>(app, "--ar-alpha", "ar_alpha", "AR(1) coefficient");
  f.add<double>(app, "--dt", "dt_sample", "sampling interval for flows");
  f.add<double>(app, "--filter-cutoff", "filter_cutoff_hz", "low-pass cutoff (Hz)");
  f.add<double>(app, "--filter-rate", "filter_sampling_rate_hz", "record sampling rate (Hz)");
  f.add<bool>(app, "--filter-zero-phase", "filter_zero_phase", "forward-backward filtering");
}

void add_surrogate_flags(CLI::App* app, ConfigFlags& f) {
  f.add<std::string>(app, "--algorithm", "surrogate", "shuffle | ft | aaft | iaaft");
  f.add<std::size_t>(app, "--max-iter", "max_iter", "IAAFT iteration cap");
  f.add<double>(app, "--tolerance", "tolerance", "IAAFT spectral tolerance");
}

void add_train_flags(CLI::App* app, ConfigFlags& f) {
  f.add<std::size_t>(app, "--hidden", "hidden", "hidden units");
  f.add<std::size_t>(app, "--epochs", "epochs", "training epochs");
  f.add<double>(app, "--lr", "lr", "Adam learning rate");
  f.add<std::size_t>(app, "--batch-size", "batch_size", "mini-batch size");
  f.add<double>(app, "--clip-norm", "clip_norm", "global gradient-norm clip (0 disables)");
}

void apply_record_flag(ConfigFlags& f) {
  if (f.overrides.contains("record") && !f.overrides.contains("system"))
    f.overrides["system"] = "record";
}

void freeze(const RunConfig& cfg) {
  write_text(cfg.output_dir / "config.json", dump_json(cfg.to_json()));
}

void write_surrogates(const RunConfig& cfg, const std::vector<TimeSeries>& originals,
                      const std::vector<SurrogateResult>& results, const SurrogateConfig& sc) {
  std::vector<TimeSeries> raw;
  for (const auto& r : results) raw.push_back(r.surrogate);
  write_realizations_csv(cfg.output_dir / "surrogates.csv", raw);
  write_text(cfg.output_dir / "surrogates.json", dump_json(surrogate_report(originals, results, sc)));
}

int cmd_generate(ConfigFlags& f) {
  apply_record_flag(f);
  const RunConfig cfg = f.resolve("generate");
  freeze(cfg);
  const auto realizations = generate_stage(cfg);
  write_realizations_csv(cfg.output_dir / "realizations.csv", realizations);
  write_text(cfg.output_dir / "realizations.json", dump_json(realization_metadata(cfg, realizations)));
  return 0;
}

int cmd_surrogate(ConfigFlags& f, const std::string& input) {
  const RunConfig cfg = f.resolve("surrogate");
  freeze(cfg);
  const auto originals = read_realizations_csv(input);
  SurrogateConfig sc = cfg.surrogate;
  sc.seed = cfg.seeds.surrogate;
  write_surrogates(cfg, originals, make_surrogates(originals, sc), sc);
  return 0;
}

int cmd_dataset(ConfigFlags& f, const std::string& input, const std::string& filter_json) {
  apply_record_flag(f);
  if (!filter_json.empty()) {
    const json spec = json::parse(read_text(filter_json));
    for (const auto& [key, value] : spec.items()) {
      if (key == "cutoff_hz") f.overrides.emplace("filter_cutoff_hz", value);
      else if (key == "sampling_rate_hz") f.overrides.emplace("filter_sampling_rate_hz", value);
      else if (key == "zero_phase") f.overrides.emplace("filter_zero_phase", value);
      else if (key == "order") {
        if (value.get<int>() != 4) throw Error(ErrorKind::Design, "only order 4 is supported");
      } else {
        throw Error(ErrorKind::Config, "unknown filter spec key '" + key + "'");
      }
    }
  }
  const RunConfig cfg = f.resolve("dataset");
  std::vector<TimeSeries> originals;
  if (cfg.system == "record") {
    originals = generate_stage(cfg);
  } else {
    if (input.empty()) throw Error(ErrorKind::Usage, "dataset needs --input or --record");
    originals = read_realizations_csv(input);
    if (cfg.filter)
      for (auto& ts : originals) ts = butterworth_lowpass(ts, *cfg.filter);
  }
  freeze(cfg);
  SurrogateConfig sc = cfg.surrogate;
  sc.seed = cfg.seeds.surrogate;
  const auto results = make_surrogates(originals, sc);
  write_surrogates(cfg, originals, results, sc);
  const auto ds = split_dataset(pair_dataset(originals, results, sc), cfg.seeds.split,
                                cfg.train_frac, cfg.val_frac);
  write_dataset_csv(cfg.output_dir / "dataset.csv", ds);
  write_text(cfg.output_dir / "dataset.json", dump_json(dataset_metadata(ds, cfg)));
  return 0;
}

int cmd_train(ConfigFlags& f, const std::string& input) {
  const RunConfig cfg = f.resolve("train");
  freeze(cfg);
  const LabeledDataset ds = read_dataset_csv(input);
  const TrainResult result = train(ds, cfg.train_config());
  write_text(cfg.output_dir / "model.json", model_to_json(result.final_model));
  write_text(cfg.output_dir / "model_representative.json", model_to_json(result.representative));
  write_report_csv(cfg.output_dir / "report.csv", result.report);
  write_text(cfg.output_dir / "report.json", dump_json(report_metadata(result.report)));
  return 0;
}

int cmd_report(const std::string& input, std::optional<std::size_t> n_test, double significance) {
  TrainReport report = read_report_csv(input);
  if (n_test) {
    report.test_items = *n_test;
  } else if (const fs::path side = sidecar_path(input); fs::exists(side)) {
    const json meta = json::parse(read_text(side));
    report.test_items = meta.at("test_items").get<std::size_t>();
  } else {
    throw Error(ErrorKind::Usage, "no report sidecar found; pass --n-test");
  }
  if (report.test_items == 0) throw Error(ErrorKind::Parameter, "test item count must be >= 1");
  const Verdict v = make_verdict(report, "report", 0, significance);
  json out;
  out["representative_epoch"] = v.representative_epoch;
  out["representative_accuracy"] = v.representative_accuracy;
  out["successes"] = v.test.successes;
  out["trials"] = v.test.trials;
  out["p_value"] = v.test.p_value;
  out["significance"] = v.test.alpha;
  out["reject"] = v.test.reject;
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_pipeline(ConfigFlags& f) {
  apply_record_flag(f);
  const RunConfig cfg = f.resolve("pipeline");
  const PipelineResult result = run_pipeline(cfg);
  std::cout << result.verdict.to_json().dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect dynamical nonlinearity by classifying series against their surrogates"};
  app.require_subcommand(1);

  ConfigFlags gen_f, sur_f, ds_f, tr_f, pipe_f;
  std::string sur_in, ds_in, ds_filter, tr_in, rep_in;
  std::optional<std::size_t> rep_n;
  double rep_sig = 0.05;

  auto* gen = app.add_subcommand("generate", "write N realizations of length L");
  add_common(gen, gen_f);
  add_generate_flags(gen, gen_f);

  auto* sur = app.add_subcommand("surrogate", "pair every realization with a surrogate");
  add_common(sur, sur_f);
  sur->add_option("--input", sur_in, "realization CSV")->required();
  add_surrogate_flags(sur, sur_f);

  auto* ds = app.add_subcommand("dataset", "build a labeled, split dataset");
  add_common(ds, ds_f);
  ds->add_option("--input", ds_in, "realization CSV");
  ds->add_option("--filter-spec", ds_filter, "filter spec JSON (cutoff_hz, sampling_rate_hz)");
  add_generate_flags(ds, ds_f);
  add_surrogate_flags(ds, ds_f);

  auto* tr = app.add_subcommand("train", "train the RNN on a dataset CSV");
  add_common(tr, tr_f);
  tr->add_option("--input", tr_in, "dataset CSV")->required();
  add_train_flags(tr, tr_f);

  auto* rep = app.add_subcommand("report", "representative accuracy and binomial verdict");
  rep->add_option("--input", rep_in, "TrainReport CSV")->required();
  rep->add_option("--n-test", rep_n, "test-item count (default: from report.json sidecar)");
  rep->add_option("--significance", rep_sig, "test level");

  auto* pipe = app.add_subcommand("pipeline", "generate -> surrogate -> dataset -> train -> report");
  add_common(pipe, pipe_f);
  add_generate_flags(pipe, pipe_f);
  add_surrogate_flags(pipe, pipe_f);
  add_train_flags(pipe, pipe_f);
  pipe_f.add<double>(pipe, "--significance", "significance", "binomial test level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_generate(gen_f);
    if (*sur) return cmd_surrogate(sur_f, sur_in);
    if (*ds) return cmd_dataset(ds_f, ds_in, ds_filter);
    if (*tr) return cmd_train(tr_f, tr_in);
    if (*rep) return cmd_report(rep_in, rep_n, rep_sig);
    if (*pipe) return cmd_pipeline(pipe_f);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error [parse]: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error [io]: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
