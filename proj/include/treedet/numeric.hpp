#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace treedet {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b), exact for -inf operands.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

inline double log_sum_exp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

/// Natural log that maps 0 to -inf without raising a floating-point error.
inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

/// Exponential of a log-probability, clamped to [0, 1].
inline double prob_from_log(double log_p) {
  if (log_p == kNegInf) return 0.0;
  return std::min(1.0, std::exp(log_p));
}

/// log(1 - e^x) for x <= 0.
inline double log1m_exp(double x) {
  if (x == kNegInf) return 0.0;
  if (x > -0.693147180559945) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

}  // namespace treedet
