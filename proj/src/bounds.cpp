#include "rcc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rcc {

SampleSchedule::SampleSchedule(double eps, double del, std::int64_t counter)
    : epsilon(eps), delta(del), k(counter) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("SampleSchedule: epsilon in (0,1)");
  if (!(del > 0.0 && del <= 1.0)) throw std::invalid_argument("SampleSchedule: delta in (0,1]");
  if (counter < 1) throw std::invalid_argument("SampleSchedule: k >= 1");
}

std::int64_t sample_size(const SampleSchedule& s) {
  const double num = 2.3 + 1.1 * std::log(static_cast<double>(s.k)) + std::log(1.0 / s.delta);
  const double den = std::log(1.0 / (1.0 - s.epsilon));
  return static_cast<std::int64_t>(std::ceil(num / den));
}

double log_binomial_tail(std::int64_t M, double epsilon, std::int64_t h) {
  if (h < 2) throw std::invalid_argument("log_binomial_tail: h >= 2");
  if (M < 0) throw std::invalid_argument("log_binomial_tail: M >= 0");
  const std::int64_t top = h - 2;
  const double log_eps = std::log(epsilon);
  const double log_1m = std::log1p(-epsilon);
  // log-sum-exp over l = 0..min(top, M)
  double max_term = -std::numeric_limits<double>::infinity();
  const std::int64_t last = std::min(top, M);
  std::vector<double> terms(static_cast<std::size_t>(last) + 1);
  for (std::int64_t l = 0; l <= last; ++l) {
    const double log_choose = std::lgamma(static_cast<double>(M) + 1.0) -
                              std::lgamma(static_cast<double>(l) + 1.0) -
                              std::lgamma(static_cast<double>(M - l) + 1.0);
    const double t = log_choose + static_cast<double>(l) * log_eps +
                     static_cast<double>(M - l) * log_1m;
    terms[static_cast<std::size_t>(l)] = t;
    if (t > max_term) max_term = t;
  }
  if (M <= top) return 0.0;  // tail covers the whole distribution
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  return max_term + std::log(acc);
}

std::int64_t scenario_bound(double epsilon, double delta, std::int64_t helly) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("scenario_bound: epsilon");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("scenario_bound: delta");
  if (helly < 2) throw std::invalid_argument("scenario_bound: helly >= 2");
  const double log_delta = std::log(delta);
  auto ok = [&](std::int64_t M) { return log_binomial_tail(M, epsilon, helly) <= log_delta; };
  // The analytical bound is sufficient, so it brackets the search from above.
  std::int64_t hi = alamo_bound(epsilon, delta, helly);
  std::int64_t lo = helly - 1;  // below h-1 the tail equals 1
  if (ok(lo)) return lo;
  while (!ok(hi)) hi *= 2;  // guards against rounding at extreme inputs
  // Invariant: !ok(lo), ok(hi). Binary search for the threshold.
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::int64_t alamo_bound(double epsilon, double delta, std::int64_t helly) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("alamo_bound: epsilon");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("alamo_bound: delta");
  if (helly < 2) throw std::invalid_argument("alamo_bound: helly >= 2");
  const double v = (1.582 / epsilon) *
                   (std::log(1.0 / delta) + static_cast<double>(helly) - 2.0);
  return static_cast<std::int64_t>(std::ceil(v));
}

double verification_counter_threshold(double epsilon, double delta, std::int64_t helly) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("verification_counter_threshold: epsilon");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("verification_counter_threshold: delta");
  if (helly < 2) throw std::invalid_argument("verification_counter_threshold: helly >= 2");
  const double expo =
      (0.58 * std::log(1.0 / delta) + 1.58 * (static_cast<double>(helly) - 2.0) - 2.3) / 1.1;
  return std::exp(expo);
}

}  // namespace rcc
