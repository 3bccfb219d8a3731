#pragma once

#include <cstdint>

namespace rcc {

/// Accuracy/confidence pair of one node plus its verification counter.
struct SampleSchedule {
  double epsilon = 0.1;   // accuracy level in (0,1)
  double delta = 1e-9;    // confidence level in (0,1)
  std::int64_t k = 1;     // verification counter, starts at 1

  SampleSchedule() = default;
  SampleSchedule(double eps, double del, std::int64_t counter = 1);
};

/// Cardinality of the verification multisample at counter k:
///   ceil((2.3 + 1.1 ln k + ln(1/delta)) / ln(1/(1-epsilon))).
std::int64_t sample_size(const SampleSchedule& s);

/// log of the binomial tail sum_{l=0}^{h-2} C(M,l) eps^l (1-eps)^(M-l),
/// evaluated with log-gamma and log-sum-exp.
double log_binomial_tail(std::int64_t M, double epsilon, std::int64_t h);

/// Smallest M with binomial tail <= delta (tail over l = 0..h-2).
std::int64_t scenario_bound(double epsilon, double delta, std::int64_t helly);

/// Analytical sufficient sample size: ceil((1.582/eps)(ln(1/delta) + h - 2)).
std::int64_t alamo_bound(double epsilon, double delta, std::int64_t helly);

/// Verification-counter level at which the multisample size reaches the
/// scenario bound: exp((0.58 ln(1/delta) + 1.58 (h-2) - 2.3) / 1.1).
double verification_counter_threshold(double epsilon, double delta, std::int64_t helly);

}  // namespace rcc
