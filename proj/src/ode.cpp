#include "nlsurr/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsurr/error.hpp"

namespace nlsurr {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<double>;

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const DopriOptions& opt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

double rms_scaled(const Vec& v, const Vec& y, const DopriOptions& opt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = v[i] / (opt.abs_tol + opt.rel_tol * std::abs(y[i]));
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(v.size()));
}

}  // namespace

std::vector<Vec> dopri5(const OdeRhs& rhs, double t0, Vec y, std::span<const double> sample_times,
                        const DopriOptions& opt, DopriStats* stats) {
  std::vector<Vec> out;
  if (sample_times.empty()) return out;
  if (y.empty()) throw Error(ErrorKind::Length, "dopri5: empty state");
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw Error(ErrorKind::Parameter, "dopri5: tolerances must be positive");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 || (i > 0 && sample_times[i] < sample_times[i - 1]))
      throw Error(ErrorKind::Parameter, "dopri5: sample times must be ascending and >= t0");
  }

  const std::size_t n = y.size();
  const double t_end = sample_times.back();
  const double span = t_end - t0;
  const double h_min = 1e-12 * std::max(span, 1e-300);
  out.reserve(sample_times.size());

  DopriStats local;
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n), err(n);
  Vec r1(n), r2(n), r3(n), r4(n), r5(n);

  double t = t0;
  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] == t0) out.push_back(y), ++next;
  if (next == sample_times.size()) return out;

  rhs(t, y, k1);
  ++local.evaluations;

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    const double d0 = rms_scaled(y, y, opt);
    const double d1n = rms_scaled(k1, y, opt);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h0 * k1[i];
    rhs(t + h0, tmp, k2);
    ++local.evaluations;
    for (std::size_t i = 0; i < n; ++i) err[i] = k2[i] - k1[i];
    const double d2 = rms_scaled(err, y, opt) / h0;
    const double h1 = (std::max(d1n, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                   : std::pow(0.01 / std::max(d1n, d2), 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, span);

  bool last_rejected = false;
  while (next < sample_times.size()) {
    if (h < h_min)
      throw Error(ErrorKind::Stiffness,
                  "dopri5: step size underflow at t=" + std::to_string(t));
    if (t + h > t_end) h = t_end - t;
    if (h < h_min) h = h_min;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t + h, y1, k7);
    local.evaluations += 6;

    for (std::size_t i = 0; i < n; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double en = error_norm(err, y, y1, opt);

    if (!std::isfinite(en)) {
      ++local.rejected;
      h *= 0.2;
      last_rejected = true;
      continue;
    }

    if (en <= 1.0) {
      ++local.accepted;
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(y1[i]) || std::abs(y1[i]) > opt.escape_bound)
          throw Error(ErrorKind::Escape,
                      "dopri5: trajectory escaped at t=" + std::to_string(t + h));
      }
      const double t_new = t + h;
      // Dense output over [t, t_new].
      bool have_dense = false;
      while (next < sample_times.size() && sample_times[next] <= t_new) {
        if (!have_dense) {
          have_dense = true;
          for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = y1[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            r1[i] = y[i];
            r2[i] = ydiff;
            r3[i] = bspl;
            r4[i] = ydiff - h * k7[i] - bspl;
            r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
          }
        }
        const double s = (sample_times[next] - t) / h;
        const double s1 = 1.0 - s;
        Vec sample(n);
        for (std::size_t i = 0; i < n; ++i)
          sample[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
        if (sample_times[next] == t_new) sample = y1;
        out.push_back(std::move(sample));
        ++next;
      }
      y.swap(y1);
      k1.swap(k7);
      t = t_new;
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, 10.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h *= fac;
      last_rejected = false;
    } else {
      ++local.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      last_rejected = true;
    }
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace nlsurr
