#include "nlsurr/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlsurr/error.hpp"

namespace nlsurr {

void FilterSpec::validate() const {
  if (order != 4) throw Error(ErrorKind::Design, "only 4th-order Butterworth is supported");
  if (!(sampling_rate_hz > 0.0) || !std::isfinite(sampling_rate_hz))
    throw Error(ErrorKind::Design, "sampling rate must be positive");
  if (!(cutoff_hz > 0.0) || cutoff_hz >= sampling_rate_hz / 2.0)
    throw Error(ErrorKind::Design, "cutoff " + std::to_string(cutoff_hz) +
                                       " Hz must lie strictly between 0 and Nyquist (" +
                                       std::to_string(sampling_rate_hz / 2.0) + " Hz)");
}

std::array<Biquad, 2> design_butterworth_lowpass(const FilterSpec& spec) {
  spec.validate();
  // Prewarped analog cutoff for the bilinear map s = (z - 1) / (z + 1).
  const double k = std::tan(std::numbers::pi * spec.cutoff_hz / spec.sampling_rate_hz);
  const double k2 = k * k;
  std::array<Biquad, 2> sections;
  for (int i = 0; i < 2; ++i) {
    // Pole pair quality factors of the 4th-order prototype: 1 / (2 cos(theta)).
    const double theta = std::numbers::pi * (2.0 * i + 1.0) / 8.0;
    const double inv_q = 2.0 * std::cos(theta);
    const double norm = 1.0 / (1.0 + k * inv_q + k2);
    Biquad& s = sections[static_cast<std::size_t>(i)];
    s.b0 = k2 * norm;
    s.b1 = 2.0 * s.b0;
    s.b2 = s.b0;
    s.a1 = 2.0 * (k2 - 1.0) * norm;
    s.a2 = (1.0 - k * inv_q + k2) * norm;
  }
  return sections;
}

std::vector<double> apply_sections(const std::array<Biquad, 2>& sections,
                                   const std::vector<double>& x) {
  std::vector<double> y = x;
  for (const Biquad& s : sections) {
    // Transposed direct form II.
    double z1 = 0.0, z2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

TimeSeries butterworth_lowpass(const TimeSeries& series, const FilterSpec& spec) {
  check_series(series);
  if (series.size() < 8)
    throw Error(ErrorKind::Length, "butterworth_lowpass needs at least 8 samples");
  const auto sections = design_butterworth_lowpass(spec);
  TimeSeries out = series;
  out.samples = apply_sections(sections, series.samples);
  if (spec.zero_phase) {
    std::reverse(out.samples.begin(), out.samples.end());
    out.samples = apply_sections(sections, out.samples);
    std::reverse(out.samples.begin(), out.samples.end());
  }
  out.meta.params["lowpass_hz"] = spec.cutoff_hz;
  return out;
}

}  // namespace nlsurr
