#include "pplcap/analytic_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace pplcap {

void ChannelModel::validate() const {
  if (!(peak_power > 0.0 && bandwidth > 0.0 && noise_density > 0.0))
    throw std::domain_error("ChannelModel: P, B and N0 must be positive");
}

double radial_length(const ExtremeValueModel& model, double v) {
  if (!(v > 0.0)) throw std::domain_error("radial_length: argument must be positive");
  const double others = model.n_symbols - 1.0;
  const double ratio = model.domain() == SignalDomain::Real
                           ? truncated_gaussian_variance(v) / (v * v)
                           : truncated_exponential_mean(v) / v;
  return std::sqrt(ratio * others + 1.0);
}

namespace {

double log_radial_length(const ExtremeValueModel& model, double v) {
  const double others = model.n_symbols - 1.0;
  const double ratio = model.domain() == SignalDomain::Real
                           ? truncated_gaussian_variance(v) / (v * v)
                           : truncated_exponential_mean(v) / v;
  return 0.5 * std::log1p(ratio * others);
}

// Integrand values further than this below the peak are dropped (e^-80 ~ 1e-35).
constexpr double kLogCutoff = 80.0;
constexpr int kScanPoints = 600;
constexpr double kScanBottom = 1e-6;
constexpr double kUpperTailMass = 1e-14;
constexpr double kIntegralTolerance = 1e-8;

struct Window {
  double lower = 0;     // integrand below peak - kLogCutoff to the left
  double peak = 0;      // argmax
  double upper = 0;     // integrand below peak - kLogCutoff to the right
  double top = 0;       // maxima-law quantile 1 - 1e-14
  double log_peak = 0;  // log integrand at argmax
};

template <class F>
double bisect_crossing(F&& f, double inside, double outside, double level) {
  // f(inside) >= level > f(outside)
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (inside + outside);
    (f(mid) >= level ? inside : outside) = mid;
    if (std::abs(outside - inside) <= 1e-14 * std::abs(inside)) break;
  }
  return 0.5 * (inside + outside);
}

Window integration_window(const ExtremeValueModel& model) {
  Window w;
  w.top = max_quantile(model, 1.0 - kUpperTailMass);
  auto li = [&](double v) { return log_integrand(model, v); };

  std::vector<double> grid(kScanPoints);
  std::vector<double> values(kScanPoints);
  const double log_lo = std::log(kScanBottom);
  const double log_hi = std::log(w.top);
  for (int i = 0; i < kScanPoints; ++i) {
    grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kScanPoints - 1));
    values[i] = li(grid[i]);
  }
  grid.back() = w.top;
  const auto imax = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());

  const double lo = grid[std::max(0, imax - 1)];
  const double hi = grid[std::min(kScanPoints - 1, imax + 1)];
  const auto [arg, neg] =
      boost::math::tools::brent_find_minima([&](double v) { return -li(v); }, lo, hi, 52);
  w.peak = arg;
  w.log_peak = -neg;
  if (values[imax] > w.log_peak) {
    w.peak = grid[imax];
    w.log_peak = values[imax];
  }
  const double level = w.log_peak - kLogCutoff;

  w.lower = 0.0;
  for (int j = imax - 1; j >= 0; --j) {
    if (values[j] < level) {
      w.lower = bisect_crossing(li, grid[j + 1], grid[j], level);
      break;
    }
  }
  w.upper = w.top;
  for (int j = imax + 1; j < kScanPoints; ++j) {
    if (values[j] < level) {
      w.upper = bisect_crossing(li, grid[j - 1], grid[j], level);
      break;
    }
  }
  return w;
}

struct LogIntegral {
  double value = 0;      // log of the integral
  double rel_error = 0;  // estimated relative error of the integral
};

// log of the integral over [lo, hi], shifted by the integrand maximum on it
LogIntegral log_integral(const ExtremeValueModel& model, double lo, double hi, const Window& w,
                         double rel_tolerance) {
  if (!(hi > lo)) return {-std::numeric_limits<double>::infinity(), 0.0};
  double shift = w.log_peak;
  if (lo > w.peak) shift = log_integrand(model, lo);
  if (hi < w.peak) shift = log_integrand(model, hi);
  auto f = [&](double v) { return std::exp(log_integrand(model, v) - shift); };

  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  double err_total = 0.0;
  auto piece = [&](double a, double b) {
    if (!(b > a)) return;
    double err = 0.0;
    total += GK::integrate(f, a, b, 15, rel_tolerance, &err);
    err_total += err;
  };
  if (lo < w.peak && w.peak < hi) {
    piece(lo, w.peak);
    piece(w.peak, hi);
  } else {
    piece(lo, hi);
  }
  if (!(total > 0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
  return {shift + std::log(total), err_total / total};
}

VolumeEstimate finish(const ExtremeValueModel& model, const LogIntegral& integral) {
  if (integral.rel_error > 1e-6)
    throw NumericError("log_volume_lower_bound: quadrature did not reach the requested accuracy",
                       integral.rel_error);
  const int d = body_dimension(model.domain(), model.n_symbols);
  const double log_volume = log_unit_ball_volume(d).log() + integral.value;
  return make_volume_estimate(log_volume, model.n_symbols, model.domain(), EstimateMethod::Analytic);
}

}  // namespace

double log_integrand(const ExtremeValueModel& model, double v) {
  const int d = body_dimension(model.domain(), model.n_symbols);
  return log_max_pdf(model, v) + d * log_radial_length(model, v);
}

VolumeEstimate log_volume_lower_bound(const ExtremeValueModel& model, double rel_tolerance) {
  model.validate();
  if (model.n_symbols < 2) throw std::domain_error("log_volume_lower_bound: N must be >= 2");
  const Window w = integration_window(model);
  return finish(model, log_integral(model, w.lower, w.upper, w, rel_tolerance));
}

std::vector<double> integrand_profile(const ExtremeValueModel& model, const std::vector<double>& grid) {
  if (grid.empty()) throw std::domain_error("integrand_profile: empty grid");
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
      throw std::domain_error("integrand_profile: grid must be positive and strictly increasing");
    out[i] = log_integrand(model, grid[i]);
  }
  const double top = *std::max_element(out.begin(), out.end());
  for (auto& v : out) v = std::exp(v - top);
  return out;
}

double integrand_argmax(const ExtremeValueModel& model) {
  model.validate();
  return integration_window(model).peak;
}

std::vector<double> truncated_gamma_curve(const ExtremeValueModel& model, const std::vector<double>& quantile_grid) {
  model.validate();
  if (model.n_symbols < 2) throw std::domain_error("truncated_gamma_curve: N must be >= 2");
  const Window w = integration_window(model);
  const LogIntegral full = log_integral(model, w.lower, w.upper, w, kIntegralTolerance);
  std::vector<double> gammas;
  gammas.reserve(quantile_grid.size());
  double prev = 0.0;
  for (double q : quantile_grid) {
    if (!(q > 0.0 && q < 1.0) || q <= prev)
      throw std::domain_error("truncated_gamma_curve: quantiles must be increasing in (0, 1)");
    prev = q;
    const double cut = max_quantile(model, q);
    LogIntegral integral = full;
    if (cut > w.peak) {
      integral = log_integral(model, cut, w.top, w, kIntegralTolerance);
    } else if (cut > w.lower) {
      // below the peak the kept part dominates, so subtract the discarded piece
      const LogIntegral dropped = log_integral(model, w.lower, cut, w, kIntegralTolerance);
      const double ratio = std::exp(dropped.value - full.value);
      integral.value = full.value + std::log1p(-ratio);
      integral.rel_error = (full.rel_error + ratio * dropped.rel_error) / (1.0 - ratio);
    }
    if (!std::isfinite(integral.value)) {
      gammas.push_back(0.0);
      continue;
    }
    gammas.push_back(finish(model, integral).gamma);
  }
  return gammas;
}

double predicted_sample_budget(const ExtremeValueModel& model, double rel_tolerance) {
  std::vector<double> qs;
  for (int k = 32; k >= 2; --k) qs.push_back(std::pow(10.0, -0.5 * k));
  const double full = log_volume_lower_bound(model).gamma;
  const auto curve = truncated_gamma_curve(model, qs);
  double budget = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (curve[i] >= (1.0 - rel_tolerance) * full) budget = 1.0 / qs[i];
  }
  return budget;
}

BoundCurve capacity_lower_bound(const ChannelModel& channel, double gamma, const std::vector<double>& snr_grid) {
  channel.validate();
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::domain_error("capacity_lower_bound: gamma must lie in (0, 1]");
  const double scale = channel.domain == SignalDomain::Real ? 0.5 : 1.0;
  BoundCurve c;
  c.gamma_used = gamma;
  c.snr_grid = snr_grid;
  for (double rho : snr_grid) {
    if (!(rho > 0.0)) throw std::domain_error("capacity_lower_bound: SNR values must be positive");
    c.apl_capacity.push_back(scale * std::log2(rho + 1.0));
    c.ppl_lower_bound.push_back(scale * std::log2(gamma * rho + 1.0));
  }
  return c;
}

double sampled_only_upper_bound(SignalDomain domain) {
  return domain == SignalDomain::Real ? 2.0 / (std::numbers::pi * std::numbers::e) : 1.0 / std::numbers::e;
}

}  // namespace pplcap
