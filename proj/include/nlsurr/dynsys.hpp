#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nlsurr/time_series.hpp"

namespace nlsurr {

using State3 = std::array<double, 3>;

struct MapParams {
  double logistic_r = 4.0;
  double henon_a = 1.4;
  double henon_b = 0.3;
};

struct FlowParams {
  double lorenz_sigma = 10.0;
  double lorenz_rho = 28.0;
  double lorenz_beta = 8.0 / 3.0;
  double rossler_a = 0.2;
  double rossler_b = 0.2;
  double rossler_c = 5.7;
  double chua_alpha = 15.6;
  double chua_beta = 28.0;
  double chua_m0 = -8.0 / 7.0;
  double chua_m1 = -5.0 / 7.0;
};

struct NoiseParams {
  double alpha = 0.5;  ///< AR(1) coefficient, |alpha| < 1
};

enum class System { Logistic, Henon, Lorenz, Rossler, Chua, Ar1 };
enum class FlowSystem { Lorenz, Rossler, Chua };

/// Parses "logistic", "henon", "lorenz", "rossler", "chua", "ar1". Throws Error(Usage).
System parse_system(std::string_view name);
std::string_view system_name(System system) noexcept;
FlowSystem parse_flow_system(std::string_view name);
std::string_view flow_name(FlowSystem system) noexcept;
bool is_flow(System system) noexcept;

// Default observation settings for synthetic systems.
inline constexpr std::size_t kMapBurnIn = 1000;
inline constexpr double kFlowBurnInTime = 100.0;
inline constexpr std::size_t kNoiseBurnIn = 100;
double default_sampling_interval(FlowSystem system) noexcept;

/// n iterates x_1..x_n of the logistic map after discarding `burn_in` iterates.
TimeSeries iterate_logistic(double x0, double r, std::size_t n, std::size_t burn_in = 0);

/// x-coordinate of n Hénon iterates after `burn_in`; throws Error(Escape) if |x| > 1e6.
TimeSeries iterate_henon(double x0, double y0, const MapParams& params, std::size_t n,
                         std::size_t burn_in = 0);

/// One Hénon step, exposed for fixed-point checks.
std::array<double, 2> henon_step(double x, double y, const MapParams& params) noexcept;

/// Chua's piecewise-linear diode characteristic.
double chua_nonlinearity(double x, double m0, double m1) noexcept;

State3 flow_derivative(FlowSystem system, const State3& state, const FlowParams& params) noexcept;

struct IntegrationOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double burn_in_time = 0.0;  ///< model time integrated and discarded before t = 0
};

/// Samples the x-coordinate of a flow at t = dt_sample, 2 dt_sample, ... <= t_end,
/// measured after the burn-in interval.
TimeSeries rk45_integrate(FlowSystem system, const State3& y0, double t_end, double dt_sample,
                          const FlowParams& params = {}, const IntegrationOptions& options = {});

/// Deterministic core of the AR(1) generator: x_0 given, x_t = alpha x_{t-1} + e_t,
/// returns y_t = x_t sqrt|x_t| for t = 0..innovations.size().
std::vector<double> transform_ar1(double alpha, double x0, std::span<const double> innovations);

/// AR(1) series started from its stationary distribution, then `burn_in` steps discarded.
TimeSeries generate_ar1_nonlinear(const NoiseParams& params, std::size_t n, std::uint64_t seed,
                                  std::size_t burn_in = kNoiseBurnIn);

/// The latent linear process x_t matching generate_ar1_nonlinear (same seed, same draws).
std::vector<double> generate_ar1_latent(const NoiseParams& params, std::size_t n,
                                        std::uint64_t seed, std::size_t burn_in = kNoiseBurnIn);

enum class RealizationMode { Independent, Windowed };

struct SystemSpec {
  System system = System::Logistic;
  MapParams map;
  FlowParams flow;
  NoiseParams noise;
  double dt_sample = 0.0;  ///< 0 selects the per-system default
};

/// N independent realizations of length L: fresh random initial conditions per
/// realization (stream derive_seed(seed, i)) followed by the system's burn-in.
std::vector<TimeSeries> make_realizations(const SystemSpec& spec, std::size_t length,
                                          std::size_t count, std::uint64_t seed);

/// N windows of length L at uniformly random start indices of `source`.
std::vector<TimeSeries> make_windows(const TimeSeries& source, std::size_t length,
                                     std::size_t count, std::uint64_t seed);

}  // namespace nlsurr
