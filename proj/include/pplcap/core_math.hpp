#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace pplcap {

/// Strictly positive quantity stored as its natural logarithm.
///
/// Volumes of high-dimensional bodies (r^N times the unit-ball volume) leave
/// the double range long before N reaches the sizes of interest, so every
/// volume-like quantity is carried in this form until it is reported.
class LogValue {
public:
  constexpr LogValue() = default;
  static constexpr LogValue from_log(double log_magnitude) { return LogValue{log_magnitude}; }
  static LogValue from_linear(double value) { return LogValue{std::log(value)}; }
  static constexpr LogValue zero() { return LogValue{-std::numeric_limits<double>::infinity()}; }

  constexpr double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  constexpr bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }

  friend LogValue operator+(LogValue a, LogValue b);
  friend constexpr LogValue operator*(LogValue a, LogValue b) { return LogValue{a.log_ + b.log_}; }
  friend constexpr LogValue operator/(LogValue a, LogValue b) { return LogValue{a.log_ - b.log_}; }
  friend constexpr bool operator==(LogValue a, LogValue b) = default;

private:
  constexpr explicit LogValue(double l) : log_(l) {}
  double log_ = -std::numeric_limits<double>::infinity();
};

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

/// log(sum(exp(values))); -inf for an empty span.
double log_sum_exp(std::span<const double> values);

/// Streaming mean of exp(c) over log-domain contributions c.
///
/// Internally keeps a running shift (the largest contribution seen) and the
/// shifted sums of exp(c - shift) and exp(2 (c - shift)). Merging rescales to
/// the larger shift, so accumulators built on disjoint chunks combine exactly
/// like a single sequential pass up to rounding.
class StreamingLogMean {
public:
  void add(double log_contribution);
  void merge(const StreamingLogMean& other);

  std::uint64_t count() const { return count_; }
  LogValue log_sum() const;
  LogValue log_sum_squares() const;
  /// log of (1/count) * sum exp(c).
  double log_mean() const;
  /// Sample variance of exp(c) divided by the squared mean; zero for fewer
  /// than two entries.
  double relative_variance() const;
  double shift() const { return shift_; }
  double scaled_sum() const { return sum_; }

  double min_contribution() const { return min_; }
  double max_contribution() const { return shift_; }

private:
  std::uint64_t count_ = 0;
  double shift_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
};

/// Upper tail of the standard normal distribution, Q(x) = P(X > x).
double q_function(double x);

/// Variance of a standard normal variable conditioned on |x| < z.
double truncated_gaussian_variance(double z);

/// Mean of a unit-mean exponential variable conditioned on w_s < w.
double truncated_exponential_mean(double w);

/// log of the volume of the d-dimensional unit ball.
LogValue log_unit_ball_volume(int d);

}  // namespace pplcap
