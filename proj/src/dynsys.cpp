#include "nlsurr/dynsys.hpp"

#include <cmath>
#include <string>

#include "nlsurr/error.hpp"
#include "nlsurr/ode.hpp"
#include "nlsurr/rng.hpp"

namespace nlsurr {
namespace {

constexpr double kMapEscape = 1e6;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::Parameter, std::string(what) + " must be finite");
}

State3 flow_reference(FlowSystem system) {
  switch (system) {
    case FlowSystem::Lorenz: return {1.0, 1.0, 20.0};
    case FlowSystem::Rossler: return {1.0, 1.0, 0.0};
    case FlowSystem::Chua: return {0.7, 0.0, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

double flow_perturbation(FlowSystem system) {
  return system == FlowSystem::Chua ? 0.05 : 0.5;
}

void fill_flow_meta(TimeSeries& ts, FlowSystem system, const FlowParams& p) {
  ts.meta.system = std::string(flow_name(system));
  switch (system) {
    case FlowSystem::Lorenz:
      ts.meta.params = {{"sigma", p.lorenz_sigma}, {"rho", p.lorenz_rho}, {"beta", p.lorenz_beta}};
      break;
    case FlowSystem::Rossler:
      ts.meta.params = {{"a", p.rossler_a}, {"b", p.rossler_b}, {"c", p.rossler_c}};
      break;
    case FlowSystem::Chua:
      ts.meta.params = {{"alpha", p.chua_alpha},
                        {"beta", p.chua_beta},
                        {"m0", p.chua_m0},
                        {"m1", p.chua_m1}};
      break;
  }
}

FlowSystem as_flow(System system) {
  switch (system) {
    case System::Lorenz: return FlowSystem::Lorenz;
    case System::Rossler: return FlowSystem::Rossler;
    case System::Chua: return FlowSystem::Chua;
    default: break;
  }
  throw Error(ErrorKind::Usage, "not a flow system: " + std::string(system_name(system)));
}

}  // namespace

System parse_system(std::string_view name) {
  if (name == "logistic") return System::Logistic;
  if (name == "henon") return System::Henon;
  if (name == "lorenz") return System::Lorenz;
  if (name == "rossler") return System::Rossler;
  if (name == "chua") return System::Chua;
  if (name == "ar1") return System::Ar1;
  throw Error(ErrorKind::Usage, "unknown system '" + std::string(name) + "'");
}

std::string_view system_name(System system) noexcept {
  switch (system) {
    case System::Logistic: return "logistic";
    case System::Henon: return "henon";
    case System::Lorenz: return "lorenz";
    case System::Rossler: return "rossler";
    case System::Chua: return "chua";
    case System::Ar1: return "ar1";
  }
  return "unknown";
}

FlowSystem parse_flow_system(std::string_view name) {
  if (name == "lorenz") return FlowSystem::Lorenz;
  if (name == "rossler") return FlowSystem::Rossler;
  if (name == "chua") return FlowSystem::Chua;
  throw Error(ErrorKind::Usage, "unknown flow system '" + std::string(name) + "'");
}

std::string_view flow_name(FlowSystem system) noexcept {
  switch (system) {
    case FlowSystem::Lorenz: return "lorenz";
    case FlowSystem::Rossler: return "rossler";
    case FlowSystem::Chua: return "chua";
  }
  return "unknown";
}

bool is_flow(System system) noexcept {
  return system == System::Lorenz || system == System::Rossler || system == System::Chua;
}

double default_sampling_interval(FlowSystem system) noexcept {
  return system == FlowSystem::Rossler ? 0.25 : 0.05;
}

TimeSeries iterate_logistic(double x0, double r, std::size_t n, std::size_t burn_in) {
  require_finite(x0, "logistic x0");
  require_finite(r, "logistic r");
  if (x0 < 0.0 || x0 > 1.0) throw Error(ErrorKind::Parameter, "logistic x0 must lie in [0, 1]");
  if (r <= 0.0 || r > 4.0) throw Error(ErrorKind::Parameter, "logistic r must lie in (0, 4]");

  TimeSeries ts;
  ts.meta.system = "logistic";
  ts.meta.params = {{"r", r}, {"x0", x0}};
  ts.meta.burn_in = burn_in;
  ts.samples.reserve(n);
  double x = x0;
  for (std::size_t i = 0; i < burn_in; ++i) x = r * x * (1.0 - x);
  for (std::size_t i = 0; i < n; ++i) {
    x = r * x * (1.0 - x);
    ts.samples.push_back(x);
  }
  return ts;
}

std::array<double, 2> henon_step(double x, double y, const MapParams& p) noexcept {
  return {1.0 - p.henon_a * x * x + y, p.henon_b * x};
}

TimeSeries iterate_henon(double x0, double y0, const MapParams& params, std::size_t n,
                         std::size_t burn_in) {
  require_finite(x0, "henon x0");
  require_finite(y0, "henon y0");
  TimeSeries ts;
  ts.meta.system = "henon";
  ts.meta.params = {{"a", params.henon_a}, {"b", params.henon_b}, {"x0", x0}, {"y0", y0}};
  ts.meta.burn_in = burn_in;
  ts.samples.reserve(n);
  double x = x0, y = y0;
  for (std::size_t step = 1; step <= burn_in + n; ++step) {
    const auto next = henon_step(x, y, params);
    x = next[0];
    y = next[1];
    if (!std::isfinite(x) || std::abs(x) > kMapEscape)
      throw Error(ErrorKind::Escape, "henon trajectory escaped at step " + std::to_string(step));
    if (step > burn_in) ts.samples.push_back(x);
  }
  return ts;
}

double chua_nonlinearity(double x, double m0, double m1) noexcept {
  return m1 * x + 0.5 * (m0 - m1) * (std::abs(x + 1.0) - std::abs(x - 1.0));
}

State3 flow_derivative(FlowSystem system, const State3& s, const FlowParams& p) noexcept {
  const double x = s[0], y = s[1], z = s[2];
  switch (system) {
    case FlowSystem::Lorenz:
      return {p.lorenz_sigma * (y - x), x * (p.lorenz_rho - z) - y, x * y - p.lorenz_beta * z};
    case FlowSystem::Rossler:
      return {-y - z, x + p.rossler_a * y, p.rossler_b + z * (x - p.rossler_c)};
    case FlowSystem::Chua:
      return {p.chua_alpha * (y - x - chua_nonlinearity(x, p.chua_m0, p.chua_m1)), x - y + z,
              -p.chua_beta * y};
  }
  return {0.0, 0.0, 0.0};
}

TimeSeries rk45_integrate(FlowSystem system, const State3& y0, double t_end, double dt_sample,
                          const FlowParams& params, const IntegrationOptions& options) {
  if (!(t_end > 0.0)) throw Error(ErrorKind::Parameter, "t_end must be positive");
  if (!(dt_sample > 0.0)) throw Error(ErrorKind::Parameter, "dt_sample must be positive");
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0))
    throw Error(ErrorKind::Parameter, "tolerances must be positive");
  if (options.burn_in_time < 0.0) throw Error(ErrorKind::Parameter, "burn-in must be >= 0");
  for (double v : y0) require_finite(v, "initial state");

  const OdeRhs rhs = [&](double, std::span<const double> y, std::span<double> dydt) {
    const State3 d = flow_derivative(system, {y[0], y[1], y[2]}, params);
    dydt[0] = d[0];
    dydt[1] = d[1];
    dydt[2] = d[2];
  };

  const auto count = static_cast<std::size_t>(std::floor(t_end / dt_sample + 1e-9));
  std::vector<double> times;
  times.reserve(count);
  for (std::size_t i = 1; i <= count; ++i)
    times.push_back(options.burn_in_time + static_cast<double>(i) * dt_sample);

  DopriOptions opt;
  opt.rel_tol = options.rel_tol;
  opt.abs_tol = options.abs_tol;
  const auto states = dopri5(rhs, 0.0, {y0[0], y0[1], y0[2]}, times, opt);

  TimeSeries ts;
  fill_flow_meta(ts, system, params);
  ts.dt = dt_sample;
  ts.meta.burn_in = static_cast<std::size_t>(std::llround(options.burn_in_time / dt_sample));
  ts.samples.reserve(states.size());
  for (const auto& s : states) ts.samples.push_back(s[0]);
  return ts;
}

std::vector<double> transform_ar1(double alpha, double x0, std::span<const double> innovations) {
  std::vector<double> y;
  y.reserve(innovations.size() + 1);
  double x = x0;
  y.push_back(x * std::sqrt(std::abs(x)));
  for (double e : innovations) {
    x = alpha * x + e;
    y.push_back(x * std::sqrt(std::abs(x)));
  }
  return y;
}

std::vector<double> generate_ar1_latent(const NoiseParams& params, std::size_t n,
                                        std::uint64_t seed, std::size_t burn_in) {
  const double a = params.alpha;
  require_finite(a, "AR coefficient");
  if (std::abs(a) >= 1.0)
    throw Error(ErrorKind::Parameter, "AR coefficient must satisfy |alpha| < 1 (nonstationary)");
  Rng rng = make_rng(seed);
  double x = standard_normal(rng) / std::sqrt(1.0 - a * a);
  for (std::size_t i = 0; i < burn_in; ++i) x = a * x + standard_normal(rng);
  std::vector<double> xs;
  xs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) x = a * x + standard_normal(rng);
    xs.push_back(x);
  }
  return xs;
}

TimeSeries generate_ar1_nonlinear(const NoiseParams& params, std::size_t n, std::uint64_t seed,
                                  std::size_t burn_in) {
  TimeSeries ts;
  ts.meta.system = "ar1";
  ts.meta.params = {{"alpha", params.alpha}};
  ts.meta.seed = seed;
  ts.meta.burn_in = burn_in;
  ts.samples = generate_ar1_latent(params, n, seed, burn_in);
  for (double& v : ts.samples) v = v * std::sqrt(std::abs(v));
  return ts;
}

std::vector<TimeSeries> make_realizations(const SystemSpec& spec, std::size_t length,
                                          std::size_t count, std::uint64_t seed) {
  if (length == 0) throw Error(ErrorKind::Length, "realization length must be positive");
  std::vector<TimeSeries> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t stream = derive_seed(seed, i);
    Rng rng = make_rng(stream);
    TimeSeries ts;
    switch (spec.system) {
      case System::Logistic: {
        // Stay clear of the endpoints and the preimages of the fixed point at 0.
        const double x0 = uniform(rng, 0.01, 0.99);
        ts = iterate_logistic(x0, spec.map.logistic_r, length, kMapBurnIn);
        break;
      }
      case System::Henon: {
        const double x0 = uniform(rng, -0.1, 0.1);
        const double y0 = uniform(rng, -0.1, 0.1);
        ts = iterate_henon(x0, y0, spec.map, length, kMapBurnIn);
        break;
      }
      case System::Lorenz:
      case System::Rossler:
      case System::Chua: {
        const FlowSystem flow = as_flow(spec.system);
        const double dt = spec.dt_sample > 0.0 ? spec.dt_sample : default_sampling_interval(flow);
        State3 y0 = flow_reference(flow);
        const double eps = flow_perturbation(flow);
        for (double& v : y0) v += uniform(rng, -eps, eps);
        IntegrationOptions opt;
        opt.burn_in_time = kFlowBurnInTime;
        ts = rk45_integrate(flow, y0, static_cast<double>(length) * dt, dt, spec.flow, opt);
        break;
      }
      case System::Ar1:
        ts = generate_ar1_nonlinear(spec.noise, length, stream);
        break;
    }
    ts.meta.seed = stream;
    if (ts.size() != length)
      throw Error(ErrorKind::Length, "realization " + std::to_string(i) + " has wrong length");
    out.push_back(std::move(ts));
  }
  return out;
}

std::vector<TimeSeries> make_windows(const TimeSeries& source, std::size_t length,
                                     std::size_t count, std::uint64_t seed) {
  if (length == 0) throw Error(ErrorKind::Length, "window length must be positive");
  if (source.size() < length)
    throw Error(ErrorKind::Length, "source has " + std::to_string(source.size()) +
                                       " samples, shorter than window length " +
                                       std::to_string(length));
  Rng rng = make_rng(seed);
  const std::uint64_t starts = source.size() - length + 1;
  std::vector<TimeSeries> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto start = static_cast<std::size_t>(uniform_index(rng, starts));
    TimeSeries ts;
    ts.dt = source.dt;
    ts.meta = source.meta;
    ts.meta.seed = seed;
    ts.meta.params["start"] = static_cast<double>(start);
    ts.samples.assign(source.samples.begin() + static_cast<std::ptrdiff_t>(start),
                      source.samples.begin() + static_cast<std::ptrdiff_t>(start + length));
    out.push_back(std::move(ts));
  }
  return out;
}

}  // namespace nlsurr
