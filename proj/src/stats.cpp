#include "nlsurr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlsurr/error.hpp"
#include "nlsurr/train.hpp"

namespace nlsurr {
namespace {

double log_pmf(std::uint64_t k, std::uint64_t n, double log_p, double log_q) {
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0) +
         kk * log_p + (nn - kk) * log_q;
}

// log sum_{i=lo}^{hi} pmf(i), anchored at the largest term.
double log_tail(std::uint64_t lo, std::uint64_t hi, std::uint64_t n, double log_p, double log_q) {
  double peak = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = lo; i <= hi; ++i) peak = std::max(peak, log_pmf(i, n, log_p, log_q));
  double sum = 0.0;
  for (std::uint64_t i = lo; i <= hi; ++i) sum += std::exp(log_pmf(i, n, log_p, log_q) - peak);
  return peak + std::log(sum);
}

}  // namespace

BinomialTestResult binomial_test(std::uint64_t k, std::uint64_t n, double p0, double alpha) {
  if (n == 0) throw Error(ErrorKind::Parameter, "binomial_test: n must be >= 1");
  if (k > n) throw Error(ErrorKind::Parameter, "binomial_test: k exceeds n");
  if (!(p0 > 0.0 && p0 < 1.0)) throw Error(ErrorKind::Parameter, "binomial_test: p0 outside (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorKind::Parameter, "binomial_test: alpha outside (0, 1)");

  // Under p0 = 1/2 the distribution is symmetric; evaluating the reflected count
  // makes p(k) and p(n - k) bit-identical.
  const std::uint64_t kk = (p0 == 0.5 && 2 * k > n) ? n - k : k;
  const double log_p = std::log(p0), log_q = std::log1p(-p0);
  const double lower = std::exp(log_tail(0, kk, n, log_p, log_q));
  const double upper = std::exp(log_tail(kk, n, n, log_p, log_q));
  BinomialTestResult r;
  r.successes = k;
  r.trials = n;
  r.p0 = p0;
  r.alpha = alpha;
  r.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
  r.reject = r.p_value < alpha;
  return r;
}

std::pair<std::uint64_t, std::uint64_t> binomial_acceptance_band(std::uint64_t n, double p0,
                                                                 double alpha) {
  const auto center = static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * p0));
  std::uint64_t lo = center, hi = center;
  while (lo > 0 && !binomial_test(lo - 1, n, p0, alpha).reject) --lo;
  while (hi < n && !binomial_test(hi + 1, n, p0, alpha).reject) ++hi;
  return {lo, hi};
}

std::vector<double> smooth(std::span<const double> curve, std::size_t window) {
  if (window == 0) throw Error(ErrorKind::Parameter, "smoothing window must be >= 1");
  std::vector<double> out(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const std::size_t first = i + 1 >= window ? i + 1 - window : 0;
    double s = 0.0;
    for (std::size_t j = first; j <= i; ++j) s += curve[j];
    out[i] = s / static_cast<double>(i - first + 1);
  }
  return out;
}

Representative representative_accuracy(std::span<const double> train_loss_s,
                                       std::span<const double> val_loss_s,
                                       std::span<const double> test_acc_s) {
  if (train_loss_s.empty() || train_loss_s.size() != val_loss_s.size() ||
      train_loss_s.size() != test_acc_s.size())
    throw Error(ErrorKind::Length, "representative_accuracy: curves empty or of unequal length");
  std::size_t best = 0;
  for (std::size_t i = 1; i < train_loss_s.size(); ++i) {
    if (train_loss_s[i] + val_loss_s[i] < train_loss_s[best] + val_loss_s[best]) best = i;
  }
  return {best + 1, test_acc_s[best]};
}

Representative representative_accuracy(const TrainReport& report) {
  return representative_accuracy(report.train_loss_s5, report.val_loss_s5, report.test_acc_s5);
}

}  // namespace nlsurr
