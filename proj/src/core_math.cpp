#include "pplcap/core_math.hpp"

#include "pplcap/common.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>


#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pplcap {

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

LogValue operator+(LogValue a, LogValue b) { return LogValue{log_add(a.log_, b.log_)}; }

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

void StreamingLogMean::add(double c) {
  ++count_;
  min_ = std::min(min_, c);
  if (c > shift_) {
    // rescale existing sums to the new shift
    const double f = std::exp(shift_ - c);
    sum_ = sum_ * f + 1.0;
    sum_sq_ = sum_sq_ * f * f + 1.0;
    shift_ = c;
  } else {
    const double e = std::exp(c - shift_);
    sum_ += e;
    sum_sq_ += e * e;
  }
}

void StreamingLogMean::merge(const StreamingLogMean& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  min_ = std::min(min_, other.min_);
  count_ += other.count_;
  if (other.shift_ > shift_) {
    const double f = std::exp(shift_ - other.shift_);
    sum_ = sum_ * f + other.sum_;
    sum_sq_ = sum_sq_ * f * f + other.sum_sq_;
    shift_ = other.shift_;
  } else {
    const double f = std::exp(other.shift_ - shift_);
    sum_ += other.sum_ * f;
    sum_sq_ += other.sum_sq_ * f * f;
  }
}

LogValue StreamingLogMean::log_sum() const {
  if (count_ == 0) return LogValue::zero();
  return LogValue::from_log(shift_ + std::log(sum_));
}

LogValue StreamingLogMean::log_sum_squares() const {
  if (count_ == 0) return LogValue::zero();
  return LogValue::from_log(2.0 * shift_ + std::log(sum_sq_));
}

double StreamingLogMean::log_mean() const {
  if (count_ == 0) throw std::domain_error("StreamingLogMean: empty accumulator");
  return log_sum().log() - std::log(static_cast<double>(count_));
}

double StreamingLogMean::relative_variance() const {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double pop = n * sum_sq_ / (sum_ * sum_) - 1.0;
  return std::max(0.0, pop * n / (n - 1.0));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace {

constexpr double kQuadTol = 1e-13;

template <class F>
double integrate(F f, double a, double b) {
  double err = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, kQuadTol, &err);
  if (err > 1e-12 * std::abs(value) + 1e-300) {
    throw NumericError("truncated_gaussian_variance: quadrature did not converge", err / std::abs(value));
  }
  return value;
}

}  // namespace

double truncated_gaussian_variance(double z) {
  if (!(z > 0.0)) throw std::domain_error("truncated_gaussian_variance: z must be positive");
  // near-uniform limit, series of the ratio of the two integrals
  if (z < 1e-2) {
    const double z2 = z * z;
    return z2 / 3.0 * (1.0 - 2.0 * z2 / 15.0 + 2.0 * z2 * z2 / 315.0);
  }
  // the Gaussian mass beyond 40 is below double resolution; x = upper * t
  const double upper = std::min(z, 40.0);
  const double c = 0.5 * upper * upper;
  const double num = integrate([c](double t) { return t * t * std::exp(-c * t * t); }, 0.0, 1.0);
  const double den = integrate([c](double t) { return std::exp(-c * t * t); }, 0.0, 1.0);
  return upper * upper * num / den;
}

double truncated_exponential_mean(double w) {
  if (!(w > 0.0)) throw std::domain_error("truncated_exponential_mean: w must be positive");
  if (w < 1e-9) return 0.5 * w;
  if (w < 1e-2) {
    // 1 - w/(e^w - 1) expanded with Bernoulli numbers; exact to rounding below 1e-2
    const double w2 = w * w;
    return w / 2.0 - w2 / 12.0 + w2 * w2 / 720.0 - w2 * w2 * w2 / 30240.0;
  }
  return 1.0 - w / std::expm1(w);
}

LogValue log_unit_ball_volume(int d) {
  if (d < 1) throw std::domain_error("log_unit_ball_volume: dimension must be >= 1");
  const long double half = static_cast<long double>(d) / 2.0L;
  int sign = 0;
  const long double v = half * std::log(std::numbers::pi_v<long double>) - ::lgammal_r(half + 1.0L, &sign);
  return LogValue::from_log(static_cast<double>(v));
}

}  // namespace pplcap
