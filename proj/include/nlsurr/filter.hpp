#pragma once

#include <array>
#include <vector>

#include "nlsurr/time_series.hpp"

namespace nlsurr {

struct FilterSpec {
  int order = 4;
  double cutoff_hz = 40.0;
  double sampling_rate_hz = 0.0;  ///< required; no default
  bool zero_phase = false;        ///< forward-backward pass instead of a single causal pass

  /// Throws Error(Design) unless order == 4 and 0 < cutoff < sampling_rate / 2.
  void validate() const;
};

/// Normalized second-order section: y = b0 x + b1 x' + b2 x'' - a1 y' - a2 y''.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
};

/// 4th-order Butterworth low-pass as two cascaded biquads, bilinear transform with prewarping.
std::array<Biquad, 2> design_butterworth_lowpass(const FilterSpec& spec);

/// Runs the cascade over `x` from rest.
std::vector<double> apply_sections(const std::array<Biquad, 2>& sections,
                                   const std::vector<double>& x);

/// Throws Error(Length) for fewer than 8 samples.
TimeSeries butterworth_lowpass(const TimeSeries& series, const FilterSpec& spec);

}  // namespace nlsurr
