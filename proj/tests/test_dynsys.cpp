#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "nlsurr/dynsys.hpp"
#include "nlsurr/error.hpp"
#include "nlsurr/rng.hpp"

using namespace nlsurr;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an nlsurr::Error";
  return ErrorKind::Usage;
}

}  // namespace

TEST(Logistic, SingleStepArithmetic) {
  EXPECT_DOUBLE_EQ(iterate_logistic(0.2, 4.0, 1).samples[0], 0.64);
  EXPECT_DOUBLE_EQ(iterate_logistic(0.64, 4.0, 1).samples[0], 0.9216);
}

TEST(Logistic, ZeroIsFixed) {
  const auto ts = iterate_logistic(0.0, 4.0, 50);
  ASSERT_EQ(ts.size(), 50u);
  for (double v : ts.samples) EXPECT_EQ(v, 0.0);
}

TEST(Logistic, BurnInDiscardsLeadingIterates) {
  const auto full = iterate_logistic(0.3, 4.0, 20);
  const auto later = iterate_logistic(0.3, 4.0, 10, 10);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(later.samples[i], full.samples[10 + i]);
}

TEST(Logistic, StaysInUnitInterval) {
  Rng rng = make_rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ts = iterate_logistic(uniform01(rng), 4.0, 2000);
    for (double v : ts.samples) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(Logistic, RejectsBadParameters) {
  EXPECT_EQ(kind_of([] { iterate_logistic(1.5, 4.0, 1); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { iterate_logistic(0.5, 4.5, 1); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { iterate_logistic(0.5, 0.0, 1); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { iterate_logistic(NAN, 4.0, 1); }), ErrorKind::Parameter);
}

TEST(Henon, StepsFromKnownPoints) {
  const MapParams p;
  const auto a = henon_step(0.0, 0.0, p);
  EXPECT_DOUBLE_EQ(a[0], 1.0);
  EXPECT_DOUBLE_EQ(a[1], 0.0);
  const auto b = henon_step(1.0, 0.0, p);
  EXPECT_NEAR(b[0], -0.4, 1e-15);
  EXPECT_DOUBLE_EQ(b[1], 0.3);
  EXPECT_DOUBLE_EQ(iterate_henon(0.0, 0.0, p, 1).samples[0], 1.0);
}

TEST(Henon, FixedPointFromQuadraticRoot) {
  // Fixed point: x = 1 - a x^2 + b x  =>  a x^2 + (1 - b) x - 1 = 0.
  const MapParams p;
  const double qa = p.henon_a, qb = 1.0 - p.henon_b, qc = -1.0;
  const double x = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
  const double y = p.henon_b * x;
  EXPECT_NEAR(x, 0.6313545, 1e-7);
  EXPECT_NEAR(y, 0.1894064, 1e-7);
  const auto next = henon_step(x, y, p);
  EXPECT_NEAR(next[0], x, 1e-12);
  EXPECT_NEAR(next[1], y, 1e-12);
}

TEST(Henon, EscapeNamesStep) {
  try {
    iterate_henon(10.0, 0.0, MapParams{}, 100);
    FAIL() << "expected escape";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Escape);
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(Flows, DerivativesAtUnitState) {
  const FlowParams p;
  const auto lz = flow_derivative(FlowSystem::Lorenz, {1, 1, 1}, p);
  EXPECT_DOUBLE_EQ(lz[0], 0.0);
  EXPECT_DOUBLE_EQ(lz[1], 26.0);
  EXPECT_NEAR(lz[2], -5.0 / 3.0, 1e-15);
  const auto rs = flow_derivative(FlowSystem::Rossler, {1, 1, 1}, p);
  EXPECT_DOUBLE_EQ(rs[0], -2.0);
  EXPECT_DOUBLE_EQ(rs[1], 1.2);
  EXPECT_NEAR(rs[2], -4.5, 1e-15);
}

TEST(Flows, LorenzFixedPoint) {
  const FlowParams p;
  const double c = std::sqrt(p.lorenz_beta * (p.lorenz_rho - 1.0));
  EXPECT_NEAR(c, std::sqrt(72.0), 1e-12);
  const auto d = flow_derivative(FlowSystem::Lorenz, {c, c, p.lorenz_rho - 1.0}, p);
  for (double v : d) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Flows, UnknownNameIsUsageError) {
  EXPECT_EQ(kind_of([] { parse_flow_system("duffing"); }), ErrorKind::Usage);
  EXPECT_EQ(kind_of([] { parse_system("duffing"); }), ErrorKind::Usage);
}

TEST(Chua, KnownValues) {
  const double m0 = -8.0 / 7.0, m1 = -5.0 / 7.0;
  EXPECT_EQ(chua_nonlinearity(0.0, m0, m1), 0.0);
  EXPECT_NEAR(chua_nonlinearity(1.0, m0, m1), m0, 1e-15);
  EXPECT_NEAR(chua_nonlinearity(-1.0, m0, m1), 8.0 / 7.0, 1e-15);
}

TEST(Chua, OddAndPiecewiseLinear) {
  const double m0 = -8.0 / 7.0, m1 = -5.0 / 7.0;
  Rng rng = make_rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform(rng, -5.0, 5.0);
    EXPECT_NEAR(chua_nonlinearity(-x, m0, m1), -chua_nonlinearity(x, m0, m1), 1e-14);
    const double h = 1e-4;
    const double slope =
        (chua_nonlinearity(x + h, m0, m1) - chua_nonlinearity(x - h, m0, m1)) / (2.0 * h);
    if (std::abs(x) > 1.0 + h) EXPECT_NEAR(slope, m1, 1e-9);
    if (std::abs(x) < 1.0 - h) EXPECT_NEAR(slope, m0, 1e-9);
  }
}

TEST(Rk45Integrate, StationaryPointStaysPut) {
  // Lorenz origin is an equilibrium.
  const auto ts = rk45_integrate(FlowSystem::Lorenz, {0, 0, 0}, 5.0, 0.05);
  ASSERT_EQ(ts.size(), 100u);
  for (double v : ts.samples) EXPECT_EQ(v, 0.0);
  ASSERT_TRUE(ts.dt.has_value());
  EXPECT_DOUBLE_EQ(*ts.dt, 0.05);
}

TEST(Rk45Integrate, RejectsBadArguments) {
  EXPECT_EQ(kind_of([] { rk45_integrate(FlowSystem::Lorenz, {1, 1, 1}, 0.0, 0.1); }),
            ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { rk45_integrate(FlowSystem::Lorenz, {1, 1, 1}, 1.0, -0.1); }),
            ErrorKind::Parameter);
  IntegrationOptions opt;
  opt.rel_tol = 0.0;
  EXPECT_EQ(kind_of([&] { rk45_integrate(FlowSystem::Lorenz, {1, 1, 1}, 1.0, 0.1, {}, opt); }),
            ErrorKind::Parameter);
}

TEST(Rk45Integrate, ChaoticFlowsStayBounded) {
  for (auto sys : {FlowSystem::Lorenz, FlowSystem::Rossler, FlowSystem::Chua}) {
    IntegrationOptions opt;
    opt.burn_in_time = 100.0;
    const State3 y0 = sys == FlowSystem::Chua ? State3{0.7, 0, 0} : State3{1, 1, 1};
    const auto ts = rk45_integrate(sys, y0, 50.0, default_sampling_interval(sys), {}, opt);
    double lo = 1e9, hi = -1e9;
    for (double v : ts.samples) lo = std::min(lo, v), hi = std::max(hi, v);
    EXPECT_LT(hi - lo, 100.0) << flow_name(sys);
    EXPECT_GT(hi - lo, 0.1) << flow_name(sys);
  }
}

TEST(Ar1, ZeroInnovationsHalveEachStep) {
  const std::vector<double> zeros(4, 0.0);
  const auto y = transform_ar1(0.5, 1.0, zeros);
  ASSERT_EQ(y.size(), 5u);
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_NEAR(y[1], 0.353553, 1e-6);
  EXPECT_DOUBLE_EQ(y[2], 0.125);
}

TEST(Ar1, WhiteWhenAlphaZero) {
  const std::size_t n = 20000;
  const auto x = generate_ar1_latent({0.0}, n, 11);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + 1 < n) num += (x[i] - mean) * (x[i + 1] - mean);
  }
  EXPECT_LT(std::abs(num / den), 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Ar1, StationaryVarianceMonteCarlo) {
  const std::size_t n = 1'000'000;
  const auto x = generate_ar1_latent({0.8}, n, 5);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  const double expected = 1.0 / (1.0 - 0.64);
  EXPECT_NEAR(var / expected, 1.0, 0.02);
}

TEST(Ar1, ObservableIsTransformOfLatent) {
  const auto x = generate_ar1_latent({0.4}, 100, 9);
  const auto y = generate_ar1_nonlinear({0.4}, 100, 9);
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_EQ(y.samples[i], x[i] * std::sqrt(std::abs(x[i])));
}

TEST(Ar1, NonstationaryRejected) {
  EXPECT_EQ(kind_of([] { generate_ar1_nonlinear({1.0}, 10, 1); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { generate_ar1_nonlinear({-1.2}, 10, 1); }), ErrorKind::Parameter);
}

TEST(Realizations, LogisticShapeAndRange) {
  SystemSpec spec;
  spec.system = System::Logistic;
  const auto set = make_realizations(spec, 32, 1000, 1);
  ASSERT_EQ(set.size(), 1000u);
  for (const auto& ts : set) {
    ASSERT_EQ(ts.size(), 32u);
    for (double v : ts.samples) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(Realizations, DeterministicPerSeed) {
  for (auto sys : {System::Logistic, System::Henon, System::Lorenz, System::Ar1}) {
    SystemSpec spec;
    spec.system = sys;
    const auto a = make_realizations(spec, 16, 5, 42);
    const auto b = make_realizations(spec, 16, 5, 42);
    const auto c = make_realizations(spec, 16, 5, 43);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].samples, b[i].samples);
      EXPECT_NE(a[i].samples, c[i].samples);
    }
  }
}

TEST(Realizations, IndependentStreamsDiffer) {
  SystemSpec spec;
  spec.system = System::Rossler;
  const auto set = make_realizations(spec, 32, 3, 1);
  EXPECT_NE(set[0].samples, set[1].samples);
  EXPECT_DOUBLE_EQ(*set[0].dt, 0.25);
}

TEST(Windows, ForcedSingleWindow) {
  TimeSeries src;
  src.samples = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto w = make_windows(src, 8, 1, 99);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].samples, src.samples);
}

TEST(Windows, ReproduceSourceSlices) {
  TimeSeries src;
  Rng rng = make_rng(1);
  for (int i = 0; i < 500; ++i) src.samples.push_back(standard_normal(rng));
  const auto w = make_windows(src, 64, 200, 5);
  for (const auto& ts : w) {
    const auto start = static_cast<std::size_t>(ts.meta.params.at("start"));
    ASSERT_LE(start + 64, src.size());
    for (std::size_t i = 0; i < 64; ++i) ASSERT_EQ(ts.samples[i], src.samples[start + i]);
  }
}

TEST(Windows, ShortSourceIsLengthError) {
  TimeSeries src;
  src.samples.assign(10, 1.0);
  EXPECT_EQ(kind_of([&] { make_windows(src, 32, 1, 0); }), ErrorKind::Length);
}
