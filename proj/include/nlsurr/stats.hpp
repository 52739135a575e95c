#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace nlsurr {

struct TrainReport;

struct BinomialTestResult {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double p0 = 0.5;
  double alpha = 0.05;
  double p_value = 1.0;
  bool reject = false;
};

/// Exact two-sided test, p = min(1, 2 min(P(X <= k), P(X >= k))), tails summed in
/// log space. Throws Error(Parameter) on invalid k, n, p0 or alpha.
BinomialTestResult binomial_test(std::uint64_t k, std::uint64_t n, double p0 = 0.5,
                                 double alpha = 0.05);

/// Smallest symmetric [lo, hi] success-count band around n p0 whose two-sided test does
/// not reject at `alpha`: every k in [lo, hi] has p >= alpha.
std::pair<std::uint64_t, std::uint64_t> binomial_acceptance_band(std::uint64_t n, double p0 = 0.5,
                                                                 double alpha = 0.05);

/// Trailing moving average; the first window - 1 points average the available prefix.
std::vector<double> smooth(std::span<const double> curve, std::size_t window = 5);

struct Representative {
  std::size_t epoch = 0;  ///< 1-based
  double accuracy = 0.0;
};

/// Epoch minimizing smoothed train + validation loss (earliest on ties) and the
/// smoothed test accuracy there.
Representative representative_accuracy(std::span<const double> train_loss_s,
                                       std::span<const double> val_loss_s,
                                       std::span<const double> test_acc_s);
Representative representative_accuracy(const TrainReport& report);

}  // namespace nlsurr
