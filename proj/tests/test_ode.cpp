#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nlsurr/error.hpp"
#include "nlsurr/ode.hpp"

using namespace nlsurr;

namespace {

const OdeRhs kGrowth = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0]; };
const OdeRhs kHarmonic = [](double, std::span<const double> y, std::span<double> d) {
  d[0] = y[1];
  d[1] = -y[0];
};

double growth_error(double rel_tol) {
  DopriOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = rel_tol * 1e-3;
  const std::vector<double> t{1.0};
  const auto y = dopri5(kGrowth, 0.0, {1.0}, t, opt);
  return std::abs(y[0][0] - std::exp(1.0)) / std::exp(1.0);
}

}  // namespace

TEST(Dopri5, ConstantField) {
  const OdeRhs zero = [](double, std::span<const double>, std::span<double> d) {
    std::fill(d.begin(), d.end(), 0.0);
  };
  std::vector<double> t;
  for (int i = 1; i <= 20; ++i) t.push_back(0.5 * i);
  const auto y = dopri5(zero, 0.0, {1.0, -2.0, 3.5}, t);
  ASSERT_EQ(y.size(), t.size());
  for (const auto& s : y) EXPECT_EQ(s, (std::vector<double>{1.0, -2.0, 3.5}));
}

TEST(Dopri5, ExponentialAtOne) {
  const std::vector<double> t{1.0};
  const auto y = dopri5(kGrowth, 0.0, {1.0}, t);
  EXPECT_NEAR(y[0][0], 2.718282, 1e-6);
  EXPECT_NEAR(y[0][0], std::exp(1.0), 1e-8);
}

TEST(Dopri5, DenseOutputMatchesAnalytic) {
  std::vector<double> t;
  for (int i = 1; i <= 100; ++i) t.push_back(0.0137 * i);
  const auto y = dopri5(kGrowth, 0.0, {1.0}, t);
  for (std::size_t i = 0; i < t.size(); ++i)
    EXPECT_NEAR(y[i][0], std::exp(t[i]), 1e-8 * std::exp(t[i]));
}

TEST(Dopri5, HarmonicEnergyConserved) {
  std::vector<double> t;
  for (int i = 1; i <= 1000; ++i) t.push_back(0.1 * i);
  const auto y = dopri5(kHarmonic, 0.0, {1.0, 0.0}, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = y[i][0] * y[i][0] + y[i][1] * y[i][1];
    ASSERT_LT(std::abs(e - 1.0), 1e-6) << "t=" << t[i];
  }
  EXPECT_NEAR(y.back()[0], std::cos(100.0), 1e-6);
}

TEST(Dopri5, LocalAccuracyScalesWithTolerance) {
  for (double tol : {1e-6, 1e-9}) EXPECT_LT(growth_error(tol), 10.0 * tol) << tol;
}

TEST(Dopri5, TighterToleranceNeverWorse) {
  double prev = growth_error(1e-4);
  for (double tol = 5e-5; tol > 1e-11; tol *= 0.5) {
    const double err = growth_error(tol);
    EXPECT_LE(err, prev * (1.0 + 1e-9) + 1e-15) << tol;
    prev = err;
  }
}

TEST(Dopri5, TighterToleranceNeverWorseHarmonic) {
  auto err = [](double tol) {
    DopriOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-3;
    const std::vector<double> t{20.0};
    const auto y = dopri5(kHarmonic, 0.0, {1.0, 0.0}, t, opt);
    return std::hypot(y[0][0] - std::cos(20.0), y[0][1] + std::sin(20.0));
  };
  double prev = err(1e-5);
  for (double tol = 5e-6; tol > 1e-11; tol *= 0.5) {
    const double e = err(tol);
    EXPECT_LE(e, prev * (1.0 + 1e-9) + 1e-14) << tol;
    prev = e;
  }
}

TEST(Dopri5, EscapeDetected) {
  // y' = y^2 blows up at t = 1.
  const OdeRhs blowup = [](double, std::span<const double> y, std::span<double> d) {
    d[0] = y[0] * y[0];
  };
  const std::vector<double> t{2.0};
  try {
    dopri5(blowup, 0.0, {1.0}, t);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::Escape || e.kind() == ErrorKind::Stiffness);
  }
}

TEST(Dopri5, StepUnderflowIsStiffnessError) {
  const OdeRhs poisoned = [](double t, std::span<const double>, std::span<double> d) {
    d[0] = t > 0.5 ? std::nan("") : 1.0;
  };
  const std::vector<double> t{1.0};
  try {
    dopri5(poisoned, 0.0, {0.0}, t);
    FAIL() << "expected stiffness error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Stiffness);
  }
}
