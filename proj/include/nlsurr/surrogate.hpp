#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nlsurr/time_series.hpp"

namespace nlsurr {

enum class SurrogateAlgorithm { Shuffle, Ft, Aaft, Iaaft };

SurrogateAlgorithm parse_surrogate_algorithm(std::string_view name);
std::string_view surrogate_algorithm_name(SurrogateAlgorithm algorithm) noexcept;

struct SurrogateConfig {
  SurrogateAlgorithm algorithm = SurrogateAlgorithm::Iaaft;
  std::size_t max_iter = 100;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;

  /// Throws Error(Parameter) if max_iter == 0 or tolerance <= 0.
  void validate() const;
};

struct SurrogateResult {
  TimeSeries surrogate;
  std::vector<double> discrepancy_trace;  ///< one entry per iteration (IAAFT only)
  std::size_t iterations = 0;
  bool converged = false;
};

/// RMS difference of amplitude spectra divided by the RMS amplitude of `reference`.
/// Throws Error(Length) on length mismatch, Error(Normalization) for zero-energy reference.
double spectral_discrepancy(std::span<const double> reference, std::span<const double> candidate);

/// Returns the multiset of `donor` arranged in the rank order of `templ`.
/// Ties in the template keep positional order.
std::vector<double> rank_order(std::span<const double> donor, std::span<const double> templ);

SurrogateResult shuffle_surrogate(const TimeSeries& series, std::uint64_t seed);
SurrogateResult ft_surrogate(const TimeSeries& series, std::uint64_t seed);
SurrogateResult aaft_surrogate(const TimeSeries& series, std::uint64_t seed);

/// Iterated amplitude-adjusted Fourier transform surrogate. Starts from a random
/// shuffle, then alternates amplitude-spectrum substitution and rank ordering
/// until the discrepancy drops to config.tolerance, config.max_iter iterations
/// pass, or the iteration reaches a fixed point. The iterate with the smallest
/// discrepancy is returned, so its values are always a permutation of the input.
SurrogateResult iaaft_surrogate(const TimeSeries& series, const SurrogateConfig& config);

/// Dispatches on config.algorithm.
SurrogateResult make_surrogate(const TimeSeries& series, const SurrogateConfig& config);

}  // namespace nlsurr
