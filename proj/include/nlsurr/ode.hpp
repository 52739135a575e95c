#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nlsurr {

/// dy/dt = f(t, y); writes the derivative into `dydt`.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct DopriOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;   ///< 0 picks a starting step automatically
  double escape_bound = 1e6;   ///< any |y_i| above this aborts with Error(Escape)
};

struct DopriStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

/// Adaptive Dormand-Prince 5(4) integrator with the 4th-order continuous
/// extension. Returns the state at each time in `sample_times` (ascending, all
/// within [t0, t_end]); the integration runs from t0 to the last sample time.
///
/// Throws Error(Stiffness) when the step falls below 1e-12 * (t_end - t0) and
/// Error(Escape) when the solution leaves the escape bound.
std::vector<std::vector<double>> dopri5(const OdeRhs& rhs, double t0, std::vector<double> y0,
                                        std::span<const double> sample_times,
                                        const DopriOptions& options = {},
                                        DopriStats* stats = nullptr);

}  // namespace nlsurr
