#include "nlsurr/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nlsurr/error.hpp"

namespace nlsurr {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token, std::size_t line, const fs::path& path) {
  const std::string t = trim(token);
  if (t.empty())
    throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": empty field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v))
    throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line) +
                                      ": malformed number '" + t + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

void append_row(std::string& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  out += '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string read_text(const fs::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  return p.replace_extension(".json");
}

TimeSeries load_series(const fs::path& path, SeriesFormat format) {
  auto in = open_in(path);
  TimeSeries ts;
  ts.meta.system = "record";
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (format == SeriesFormat::Column) {
      ts.samples.push_back(parse_number(line, lineno, path));
    } else {
      for (const auto& field : split_commas(line))
        ts.samples.push_back(parse_number(field, lineno, path));
      break;
    }
  }
  if (ts.samples.empty()) throw Error(ErrorKind::Length, path.string() + ": no samples");
  return ts;
}

void save_series(const fs::path& path, const TimeSeries& series, SeriesFormat format) {
  std::string out;
  if (format == SeriesFormat::Row) {
    append_row(out, series.samples);
  } else {
    for (double v : series.samples) out += format_double(v) + '\n';
  }
  write_text(path, out);
}

std::string realizations_csv(const std::vector<TimeSeries>& realizations) {
  std::string out;
  for (const auto& ts : realizations) append_row(out, ts.samples);
  return out;
}

void write_realizations_csv(const fs::path& path, const std::vector<TimeSeries>& realizations) {
  write_text(path, realizations_csv(realizations));
}

std::vector<TimeSeries> read_realizations_csv(const fs::path& path) {
  auto in = open_in(path);
  std::vector<TimeSeries> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    TimeSeries ts;
    ts.meta.system = "csv";
    for (const auto& field : split_commas(line)) ts.samples.push_back(parse_number(field, lineno, path));
    if (!out.empty() && ts.size() != out.front().size())
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) +
                                        ": row length differs from first row");
    out.push_back(std::move(ts));
  }
  if (out.empty()) throw Error(ErrorKind::Length, path.string() + ": no realizations");
  return out;
}

void write_dataset_csv(const fs::path& path, const LabeledDataset& dataset) {
  std::string out = "pair_id,label,split";
  for (std::size_t i = 0; i < dataset.length; ++i) out += ",s_" + std::to_string(i);
  out += '\n';
  for (const auto& item : dataset.items) {
    out += std::to_string(item.pair_id) + ',' + std::to_string(item.label) + ',' +
           std::string(split_name(item.split));
    for (double v : item.values) out += ',' + format_double(v);
    out += '\n';
  }
  write_text(path, out);
}

LabeledDataset read_dataset_csv(const fs::path& path) {
  auto in = open_in(path);
  LabeledDataset ds;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error(ErrorKind::Length, path.string() + ": empty file");
  ++lineno;
  const auto header = split_commas(line);
  if (header.size() < 4 || trim(header[0]) != "pair_id")
    throw Error(ErrorKind::Parse, path.string() + ":1: missing dataset header");
  ds.length = header.size() - 3;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size())
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) +
                                        ": wrong number of columns");
    LabeledItem item;
    item.pair_id = static_cast<std::size_t>(parse_number(fields[0], lineno, path));
    item.label = static_cast<int>(parse_number(fields[1], lineno, path));
    try {
      item.split = parse_split(trim(fields[2]));
    } catch (const Error&) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) +
                                        ": unknown split '" + trim(fields[2]) + "'");
    }
    for (std::size_t i = 3; i < fields.size(); ++i)
      item.values.push_back(parse_number(fields[i], lineno, path));
    ds.items.push_back(std::move(item));
  }
  return ds;
}

std::string model_to_json(const RnnModel& model) {
  // Built by hand so every weight is printed with 17 significant digits.
  auto array = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += format_double(v[i]);
    }
    return s + "]";
  };
  const std::string h = std::to_string(model.hidden);
  std::string out = "{\n";
  out += "  \"hidden\": " + h + ",\n";
  out += "  \"shapes\": {\"w_in\": [" + h + ", 1], \"w_rec\": [" + h + ", " + h +
         "], \"b_h\": [" + h + "], \"w_out\": [1, " + h + "], \"b_out\": [1]},\n";
  out += "  \"w_in\": " + array(model.w_in) + ",\n";
  out += "  \"w_rec\": " + array(model.w_rec) + ",\n";
  out += "  \"b_h\": " + array(model.b_h) + ",\n";
  out += "  \"w_out\": " + array(model.w_out) + ",\n";
  out += "  \"b_out\": " + format_double(model.b_out) + "\n}\n";
  return out;
}

RnnModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("model JSON: ") + e.what());
  }
  try {
    RnnModel m(j.at("hidden").get<std::size_t>());
    auto load = [&](const char* key, std::vector<double>& dst) {
      auto v = j.at(key).get<std::vector<double>>();
      if (v.size() != dst.size())
        throw Error(ErrorKind::Parse, std::string("model JSON: ") + key + " has wrong size");
      dst = std::move(v);
    };
    load("w_in", m.w_in);
    load("w_rec", m.w_rec);
    load("b_h", m.b_h);
    load("w_out", m.w_out);
    m.b_out = j.at("b_out").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("model JSON: ") + e.what());
  }
}

std::string report_csv(const TrainReport& r) {
  std::string out = "epoch,train_loss,val_loss,test_acc,train_loss_s5,val_loss_s5,test_acc_s5\n";
  for (std::size_t i = 0; i < r.epochs(); ++i) {
    out += std::to_string(i + 1);
    for (double v : {r.train_loss[i], r.val_loss[i], r.test_acc[i], r.train_loss_s5[i],
                     r.val_loss_s5[i], r.test_acc_s5[i]})
      out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

void write_report_csv(const fs::path& path, const TrainReport& report) {
  write_text(path, report_csv(report));
}

TrainReport read_report_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error(ErrorKind::Length, path.string() + ": empty file");
  ++lineno;
  if (trim(line).rfind("epoch,train_loss,val_loss,test_acc", 0) != 0)
    throw Error(ErrorKind::Parse, path.string() + ":1: missing report header");
  TrainReport r;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() < 4)
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) +
                                        ": expected at least 4 columns");
    r.train_loss.push_back(parse_number(fields[1], lineno, path));
    r.val_loss.push_back(parse_number(fields[2], lineno, path));
    r.test_acc.push_back(parse_number(fields[3], lineno, path));
  }
  if (r.train_loss.empty()) throw Error(ErrorKind::Length, path.string() + ": no epochs");
  r.finalize();
  return r;
}

}  // namespace nlsurr
