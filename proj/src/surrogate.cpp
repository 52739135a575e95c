#include "nlsurr/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <string>

#include "nlsurr/error.hpp"
#include "nlsurr/fft.hpp"
#include "nlsurr/rng.hpp"

namespace nlsurr {
namespace {

void require_length(const TimeSeries& series, std::size_t min_length, const char* algorithm) {
  check_series(series);
  if (series.size() < min_length)
    throw Error(ErrorKind::Length, std::string(algorithm) + " surrogate needs at least " +
                                       std::to_string(min_length) + " samples, got " +
                                       std::to_string(series.size()));
}

TimeSeries like(const TimeSeries& series, std::vector<double> samples) {
  TimeSeries out;
  out.samples = std::move(samples);
  out.dt = series.dt;
  out.meta = series.meta;
  return out;
}

void shuffle_in_place(std::vector<double>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// Random phases on every bin that has a distinct conjugate partner.
std::vector<double> randomize_phases(std::span<const double> x, Rng& rng) {
  Spectrum spec = dft(x);
  const std::size_t n = spec.size();
  for (std::size_t k = 1; k < n - k; ++k) {
    const double amp = std::abs(spec[k]);
    const double phase = 2.0 * std::numbers::pi * uniform01(rng);
    spec[k] = std::polar(amp, phase);
    spec[n - k] = std::conj(spec[k]);
  }
  return idft(spec);
}

double rms(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

double amplitude_discrepancy(std::span<const double> ref_amp, std::span<const double> cand_amp,
                             double ref_rms) {
  double s = 0.0;
  for (std::size_t k = 0; k < ref_amp.size(); ++k) {
    const double d = ref_amp[k] - cand_amp[k];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(ref_amp.size())) / ref_rms;
}

}  // namespace

SurrogateAlgorithm parse_surrogate_algorithm(std::string_view name) {
  if (name == "shuffle") return SurrogateAlgorithm::Shuffle;
  if (name == "ft") return SurrogateAlgorithm::Ft;
  if (name == "aaft") return SurrogateAlgorithm::Aaft;
  if (name == "iaaft") return SurrogateAlgorithm::Iaaft;
  throw Error(ErrorKind::Usage, "unknown surrogate algorithm '" + std::string(name) + "'");
}

std::string_view surrogate_algorithm_name(SurrogateAlgorithm algorithm) noexcept {
  switch (algorithm) {
    case SurrogateAlgorithm::Shuffle: return "shuffle";
    case SurrogateAlgorithm::Ft: return "ft";
    case SurrogateAlgorithm::Aaft: return "aaft";
    case SurrogateAlgorithm::Iaaft: return "iaaft";
  }
  return "unknown";
}

void SurrogateConfig::validate() const {
  if (max_iter == 0) throw Error(ErrorKind::Parameter, "surrogate max_iter must be >= 1");
  if (!(tolerance > 0.0) || !std::isfinite(tolerance))
    throw Error(ErrorKind::Parameter, "surrogate tolerance must be positive");
}

double spectral_discrepancy(std::span<const double> reference, std::span<const double> candidate) {
  if (reference.size() != candidate.size())
    throw Error(ErrorKind::Length, "spectral_discrepancy: length mismatch");
  if (reference.empty()) throw Error(ErrorKind::Length, "spectral_discrepancy: empty input");
  const auto ref_amp = amplitudes(dft(reference));
  const double ref_rms = rms(ref_amp);
  if (!(ref_rms > 0.0))
    throw Error(ErrorKind::Normalization, "spectral_discrepancy: reference has zero energy");
  const auto cand_amp = amplitudes(dft(candidate));
  return amplitude_discrepancy(ref_amp, cand_amp, ref_rms);
}

std::vector<double> rank_order(std::span<const double> donor, std::span<const double> templ) {
  if (donor.size() != templ.size())
    throw Error(ErrorKind::Length, "rank_order: donor and template lengths differ");
  std::vector<double> sorted(donor.begin(), donor.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> order(templ.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return templ[a] < templ[b]; });
  std::vector<double> out(donor.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = sorted[r];
  return out;
}

SurrogateResult shuffle_surrogate(const TimeSeries& series, std::uint64_t seed) {
  require_length(series, 2, "shuffle");
  Rng rng = make_rng(seed);
  std::vector<double> v = series.samples;
  shuffle_in_place(v, rng);
  return {like(series, std::move(v)), {}, 1, true};
}

SurrogateResult ft_surrogate(const TimeSeries& series, std::uint64_t seed) {
  require_length(series, 4, "FT");
  Rng rng = make_rng(seed);
  return {like(series, randomize_phases(series.samples, rng)), {}, 1, true};
}

SurrogateResult aaft_surrogate(const TimeSeries& series, std::uint64_t seed) {
  require_length(series, 4, "AAFT");
  Rng rng = make_rng(seed);
  const std::size_t n = series.size();
  std::vector<double> gauss(n);
  for (double& g : gauss) g = standard_normal(rng);
  const auto gaussianized = rank_order(gauss, series.samples);
  const auto randomized = randomize_phases(gaussianized, rng);
  return {like(series, rank_order(series.samples, randomized)), {}, 1, true};
}

SurrogateResult iaaft_surrogate(const TimeSeries& series, const SurrogateConfig& config) {
  require_length(series, 4, "IAAFT");
  config.validate();

  const auto& x = series.samples;
  const auto target_amp = amplitudes(dft(x));
  const double target_rms = rms(target_amp);
  if (!(target_rms > 0.0)) {
    // All-zero input: both constraints hold for the input itself.
    return {like(series, x), {0.0}, 1, true};
  }

  Rng rng = make_rng(config.seed);
  std::vector<double> current = x;
  shuffle_in_place(current, rng);
  Spectrum spec = dft(current);

  SurrogateResult result;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_values = current;

  for (std::size_t iter = 1; iter <= config.max_iter; ++iter) {
    // Keep the phases of the current iterate, impose the target amplitudes.
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double mag = std::abs(spec[k]);
      spec[k] = mag > 0.0 ? spec[k] * (target_amp[k] / mag) : Complex(target_amp[k], 0.0);
    }
    const auto filtered = idft(spec);
    auto next = rank_order(x, filtered);

    spec = dft(next);
    const double d = amplitude_discrepancy(target_amp, amplitudes(spec), target_rms);
    result.discrepancy_trace.push_back(d);
    result.iterations = iter;
    if (d < best) {
      best = d;
      best_values = next;
    }
    if (d <= config.tolerance) {
      result.converged = true;
      break;
    }
    if (next == current) break;  // fixed point; further iterations repeat it
    current = std::move(next);
  }

  result.surrogate = like(series, std::move(best_values));
  return result;
}

SurrogateResult make_surrogate(const TimeSeries& series, const SurrogateConfig& config) {
  switch (config.algorithm) {
    case SurrogateAlgorithm::Shuffle: return shuffle_surrogate(series, config.seed);
    case SurrogateAlgorithm::Ft: return ft_surrogate(series, config.seed);
    case SurrogateAlgorithm::Aaft: return aaft_surrogate(series, config.seed);
    case SurrogateAlgorithm::Iaaft: return iaaft_surrogate(series, config);
  }
  throw Error(ErrorKind::Usage, "unknown surrogate algorithm");
}

}  // namespace nlsurr
