#include <cmath>
#include <numbers>
#include <string>

#include "nlsurr/error.hpp"
#include "nlsurr/rng.hpp"
#include "nlsurr/time_series.hpp"

namespace nlsurr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Length: return "length";
    case ErrorKind::Escape: return "escape";
    case ErrorKind::Stiffness: return "stiffness";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Design: return "design";
    case ErrorKind::Split: return "split";
    case ErrorKind::Training: return "training";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

void check_series(const TimeSeries& series) {
  if (series.samples.empty()) throw Error(ErrorKind::Length, "time series is empty");
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    if (!std::isfinite(series.samples[i]))
      throw Error(ErrorKind::Numeric, "non-finite sample at index " + std::to_string(i));
  }
}

double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = Rng::max() - (Rng::max() % n + 1) % n;
  std::uint64_t r = rng();
  while (r > limit) r = rng();
  return r % n;
}

}  // namespace nlsurr
