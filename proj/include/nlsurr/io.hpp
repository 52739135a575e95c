#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlsurr/dataset.hpp"
#include "nlsurr/rnn.hpp"
#include "nlsurr/time_series.hpp"
#include "nlsurr/train.hpp"

namespace nlsurr {

namespace fs = std::filesystem;

/// Shortest text that round-trips: printf "%.17g".
std::string format_double(double value);

enum class SeriesFormat { Column, Row };

/// Single-column text (one value per line) or one comma-separated row.
/// Throws Error(Parse) naming the line, Error(Length) for an empty file, Error(Io).
TimeSeries load_series(const fs::path& path, SeriesFormat format = SeriesFormat::Column);
void save_series(const fs::path& path, const TimeSeries& series,
                 SeriesFormat format = SeriesFormat::Column);

/// One realization per row, no header.
void write_realizations_csv(const fs::path& path, const std::vector<TimeSeries>& realizations);
std::vector<TimeSeries> read_realizations_csv(const fs::path& path);
std::string realizations_csv(const std::vector<TimeSeries>& realizations);

/// Header pair_id,label,split,s_0..s_{L-1}; one item per row.
void write_dataset_csv(const fs::path& path, const LabeledDataset& dataset);
LabeledDataset read_dataset_csv(const fs::path& path);

std::string model_to_json(const RnnModel& model);
RnnModel model_from_json(const std::string& text);

/// Columns epoch,train_loss,val_loss,test_acc,train_loss_s5,val_loss_s5,test_acc_s5.
std::string report_csv(const TrainReport& report);
void write_report_csv(const fs::path& path, const TrainReport& report);
/// Reads the raw curves back and recomputes smoothing and the representative epoch.
TrainReport read_report_csv(const fs::path& path);

std::string read_text(const fs::path& path);
/// Creates parent directories as needed.
void write_text(const fs::path& path, const std::string& text);

/// `<dir>/<stem>.json` next to `<dir>/<stem>.csv`.
fs::path sidecar_path(const fs::path& csv_path);

}  // namespace nlsurr
