#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlsurr {

/// Where a series came from. Carried through the pipeline into sidecar files.
struct SeriesMeta {
  std::string system;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
};

/// Ordered real samples. `dt` is set for sampled flows and absent for maps.
struct TimeSeries {
  std::vector<double> samples;
  std::optional<double> dt;
  SeriesMeta meta;

  std::size_t size() const noexcept { return samples.size(); }
  std::span<const double> values() const noexcept { return samples; }
};

/// Throws Error(Length) if empty and Error(Numeric) on any non-finite sample.
void check_series(const TimeSeries& series);

}  // namespace nlsurr
