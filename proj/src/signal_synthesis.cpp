#include "pplcap/signal_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>
#include <fftw3.h>

namespace pplcap {

// ---------------------------------------------------------------------------
// SignalVector

SignalVector SignalVector::real(std::vector<double> samples) {
  SignalVector s;
  s.domain_ = SignalDomain::Real;
  s.real_ = std::move(samples);
  return s;
}

SignalVector SignalVector::complex(std::vector<std::complex<double>> samples) {
  SignalVector s;
  s.domain_ = SignalDomain::Complex;
  s.complex_ = std::move(samples);
  return s;
}

int SignalVector::n_symbols() const {
  return static_cast<int>(domain_ == SignalDomain::Real ? real_.size() : complex_.size());
}

std::span<const double> SignalVector::real_samples() const {
  if (domain_ != SignalDomain::Real) throw std::logic_error("SignalVector: not a real signal");
  return real_;
}

std::span<const std::complex<double>> SignalVector::complex_samples() const {
  if (domain_ != SignalDomain::Complex) throw std::logic_error("SignalVector: not a complex signal");
  return complex_;
}

double SignalVector::norm() const {
  double acc = 0.0;
  if (domain_ == SignalDomain::Real) {
    for (double v : real_) acc += v * v;
  } else {
    for (auto v : complex_) acc += std::norm(v);
  }
  return std::sqrt(acc);
}

double SignalVector::max_abs() const {
  double m = 0.0;
  if (domain_ == SignalDomain::Real) {
    for (double v : real_) m = std::max(m, std::abs(v));
  } else {
    double m2 = 0.0;
    for (auto v : complex_) m2 = std::max(m2, std::norm(v));
    m = std::sqrt(m2);
  }
  return m;
}

void SignalVector::scale(double factor) {
  for (auto& v : real_) v *= factor;
  for (auto& v : complex_) v *= factor;
}

double Waveform::max_abs() const {
  if (domain == SignalDomain::Real) {
    double m = 0.0;
    for (double v : real) m = std::max(m, std::abs(v));
    return m;
  }
  double m2 = 0.0;
  for (auto v : complex) m2 = std::max(m2, std::norm(v));
  return std::sqrt(m2);
}

// ---------------------------------------------------------------------------
// BandlimitInterpolator

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

// Parabolic vertex through three equally spaced magnitudes.
double parabolic_peak(double left, double mid, double right) {
  const double curv = left - 2.0 * mid + right;
  if (curv >= 0.0) return mid;
  const double d = right - left;
  return mid - d * d / (8.0 * curv);
}

}  // namespace

struct BandlimitInterpolator::Impl {
  SignalDomain domain;
  int n;
  int m;
  std::size_t big;
  // real path
  FftwBuffer<double> r_in;
  FftwBuffer<fftw_complex> r_spec;
  FftwBuffer<fftw_complex> r_big_spec;
  FftwBuffer<double> r_out;
  // complex path
  FftwBuffer<fftw_complex> c_in;
  FftwBuffer<fftw_complex> c_spec;
  FftwBuffer<fftw_complex> c_big_spec;
  FftwBuffer<fftw_complex> c_out;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Impl(SignalDomain d, int n_symbols, int oversample)
      : domain(d), n(n_symbols), m(oversample), big(static_cast<std::size_t>(n_symbols) * oversample) {
    if (m == 1) return;
    // FFTW_ESTIMATE keeps the chosen algorithm, and therefore every output
    // bit, independent of timing measurements.
    std::lock_guard lock(planner_mutex());
    if (domain == SignalDomain::Real) {
      r_in = fftw_buffer<double>(n);
      r_spec = fftw_buffer<fftw_complex>(n / 2 + 1);
      r_big_spec = fftw_buffer<fftw_complex>(big / 2 + 1);
      r_out = fftw_buffer<double>(big);
      forward = fftw_plan_dft_r2c_1d(n, r_in.get(), r_spec.get(), FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(static_cast<int>(big), r_big_spec.get(), r_out.get(), FFTW_ESTIMATE);
    } else {
      c_in = fftw_buffer<fftw_complex>(n);
      c_spec = fftw_buffer<fftw_complex>(n);
      c_big_spec = fftw_buffer<fftw_complex>(big);
      c_out = fftw_buffer<fftw_complex>(big);
      forward = fftw_plan_dft_1d(n, c_in.get(), c_spec.get(), FFTW_FORWARD, FFTW_ESTIMATE);
      backward = fftw_plan_dft_1d(static_cast<int>(big), c_big_spec.get(), c_out.get(), FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
    }
    if (forward == nullptr || backward == nullptr) throw std::runtime_error("FFTW planning failed");
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
  }

  void check(const SignalVector& s) const {
    if (s.domain() != domain || s.n_symbols() != n)
      throw std::invalid_argument("BandlimitInterpolator: signal does not match the interpolator shape");
  }

  // Fills r_out (real) or c_out (complex) with the M*N-point waveform.
  void run(const SignalVector& s) {
    const double inv_n = 1.0 / n;
    if (domain == SignalDomain::Real) {
      auto x = s.real_samples();
      std::copy(x.begin(), x.end(), r_in.get());
      fftw_execute(forward);
      const std::size_t half_big = big / 2 + 1;
      std::fill_n(&r_big_spec[0][0], 2 * half_big, 0.0);
      const int last = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
      for (int k = 0; k <= last; ++k) {
        r_big_spec[k][0] = r_spec[k][0] * inv_n;
        r_big_spec[k][1] = r_spec[k][1] * inv_n;
      }
      if (n % 2 == 0) {
        // the Nyquist bin is shared between +N/2 and -N/2; c2r supplies the mirror
        r_big_spec[n / 2][0] = 0.5 * r_spec[n / 2][0] * inv_n;
        r_big_spec[n / 2][1] = 0.0;
      }
      fftw_execute(backward);
    } else {
      auto x = s.complex_samples();
      for (int i = 0; i < n; ++i) {
        c_in[i][0] = x[i].real();
        c_in[i][1] = x[i].imag();
      }
      fftw_execute(forward);
      std::fill_n(&c_big_spec[0][0], 2 * big, 0.0);
      const int pos = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
      for (int k = 0; k <= pos; ++k) {
        c_big_spec[k][0] = c_spec[k][0] * inv_n;
        c_big_spec[k][1] = c_spec[k][1] * inv_n;
      }
      for (int k = pos + 1 + (n % 2 == 0 ? 1 : 0); k < n; ++k) {
        const std::size_t dst = big - static_cast<std::size_t>(n - k);
        c_big_spec[dst][0] = c_spec[k][0] * inv_n;
        c_big_spec[dst][1] = c_spec[k][1] * inv_n;
      }
      if (n % 2 == 0) {
        const std::size_t k = n / 2;
        for (std::size_t dst : {k, big - k}) {
          c_big_spec[dst][0] = 0.5 * c_spec[k][0] * inv_n;
          c_big_spec[dst][1] = 0.5 * c_spec[k][1] * inv_n;
        }
      }
      fftw_execute(backward);
    }
  }

  double magnitude(std::size_t i) const {
    if (domain == SignalDomain::Real) return std::abs(r_out[i]);
    return std::hypot(c_out[i][0], c_out[i][1]);
  }
};

BandlimitInterpolator::BandlimitInterpolator(SignalDomain domain, int n_symbols, int oversample) {
  if (oversample < 1) throw std::domain_error("bandlimit interpolation: oversample must be >= 1");
  if (n_symbols < 2) throw std::domain_error("bandlimit interpolation: N must be >= 2");
  impl_ = std::make_unique<Impl>(domain, n_symbols, oversample);
}

BandlimitInterpolator::~BandlimitInterpolator() = default;
BandlimitInterpolator::BandlimitInterpolator(BandlimitInterpolator&&) noexcept = default;
BandlimitInterpolator& BandlimitInterpolator::operator=(BandlimitInterpolator&&) noexcept = default;

SignalDomain BandlimitInterpolator::domain() const { return impl_->domain; }
int BandlimitInterpolator::n_symbols() const { return impl_->n; }
int BandlimitInterpolator::oversample() const { return impl_->m; }

Waveform BandlimitInterpolator::interpolate(const SignalVector& signal) {
  impl_->check(signal);
  Waveform w;
  w.domain = impl_->domain;
  if (impl_->m == 1) {
    if (w.domain == SignalDomain::Real) {
      auto x = signal.real_samples();
      w.real.assign(x.begin(), x.end());
    } else {
      auto x = signal.complex_samples();
      w.complex.assign(x.begin(), x.end());
    }
    return w;
  }
  impl_->run(signal);
  if (w.domain == SignalDomain::Real) {
    w.real.assign(impl_->r_out.get(), impl_->r_out.get() + impl_->big);
  } else {
    w.complex.resize(impl_->big);
    for (std::size_t i = 0; i < impl_->big; ++i) w.complex[i] = {impl_->c_out[i][0], impl_->c_out[i][1]};
  }
  return w;
}

double BandlimitInterpolator::peak(const SignalVector& signal, bool refine) {
  impl_->check(signal);
  if (impl_->m == 1) return signal.max_abs();
  impl_->run(signal);
  const std::size_t size = impl_->big;
  std::size_t best = 0;
  double best_sq = -1.0;
  if (impl_->domain == SignalDomain::Real) {
    const double* y = impl_->r_out.get();
    for (std::size_t i = 0; i < size; ++i) {
      const double v = y[i] * y[i];
      if (v > best_sq) {
        best_sq = v;
        best = i;
      }
    }
  } else {
    const fftw_complex* y = impl_->c_out.get();
    for (std::size_t i = 0; i < size; ++i) {
      const double v = y[i][0] * y[i][0] + y[i][1] * y[i][1];
      if (v > best_sq) {
        best_sq = v;
        best = i;
      }
    }
  }
  const double grid_peak = std::sqrt(best_sq);
  if (!refine) return grid_peak;
  const double left = impl_->magnitude((best + size - 1) % size);
  const double right = impl_->magnitude((best + 1) % size);
  return std::max(grid_peak, parabolic_peak(left, grid_peak, right));
}

Waveform bandlimit_interpolate(const SignalVector& signal, int oversample) {
  BandlimitInterpolator interp(signal.domain(), signal.n_symbols(), oversample);
  return interp.interpolate(signal);
}

// ---------------------------------------------------------------------------
// Geometry

double cube_dfo(const SignalVector& signal) {
  const double peak = signal.max_abs();
  if (!(peak > 0.0)) throw std::domain_error("cube_dfo: all-zero signal");
  return signal.norm() / peak;
}

LogValue importance_weight(double dfo, int n_symbols, SignalDomain domain) {
  const double n = static_cast<double>(n_symbols);
  if (domain == SignalDomain::Real) {
    return LogValue::from_log(n * std::numbers::ln2 - n * std::log(dfo)) /
           log_unit_ball_volume(n_symbols);
  }
  return LogValue::from_log(n * std::log(std::numbers::pi) - 2.0 * n * std::log(dfo)) /
         log_unit_ball_volume(2 * n_symbols);
}

namespace {

DirectionDraw finish_draw(SignalVector signal, double waveform_peak) {
  if (!(waveform_peak > 0.0)) throw std::domain_error("peak_and_radius: all-zero signal");
  DirectionDraw d;
  d.sample_peak = signal.max_abs();
  d.waveform_peak = waveform_peak;
  const double norm = signal.norm();
  d.radial_distance = norm / waveform_peak;
  d.cube_dfo = norm / d.sample_peak;
  signal.scale(1.0 / waveform_peak);
  d.signal = std::move(signal);
  return d;
}

}  // namespace

DirectionDraw peak_and_radius(SignalVector signal, int oversample) {
  if (oversample < 1) throw std::domain_error("peak_and_radius: oversample must be >= 1");
  if (oversample == 1) {
    const double p = signal.max_abs();
    return finish_draw(std::move(signal), p);
  }
  BandlimitInterpolator interp(signal.domain(), signal.n_symbols(), oversample);
  return peak_and_radius(std::move(signal), interp);
}

DirectionDraw peak_and_radius(SignalVector signal, BandlimitInterpolator& interpolator, bool refine_peak) {
  const double p = interpolator.peak(signal, refine_peak);
  return finish_draw(std::move(signal), p);
}

// ---------------------------------------------------------------------------
// Draws

SignalVector draw_gaussian_direction(int n_symbols, SignalDomain domain, RngStream& rng) {
  if (n_symbols < 1) throw std::domain_error("draw_gaussian_direction: N must be >= 1");
  if (domain == SignalDomain::Real) {
    boost::random::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n_symbols);
    for (auto& v : x) v = g(rng);
    return SignalVector::real(std::move(x));
  }
  boost::random::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::vector<std::complex<double>> x(n_symbols);
  for (auto& v : x) {
    const double re = g(rng);
    const double im = g(rng);
    v = {re, im};
  }
  return SignalVector::complex(std::move(x));
}

SignalVector draw_importance_uniform(int n_symbols, SignalDomain domain, RngStream& rng) {
  if (n_symbols < 1) throw std::domain_error("draw_importance_uniform: N must be >= 1");
  if (domain == SignalDomain::Real) {
    std::vector<double> x(n_symbols);
    for (auto& v : x) v = 2.0 * uniform01(rng) - 1.0;
    return SignalVector::real(std::move(x));
  }
  // uniform in the unit disc by rejection from the enclosing square
  std::vector<std::complex<double>> x(n_symbols);
  for (auto& v : x) {
    double re = 0.0;
    double im = 0.0;
    do {
      re = 2.0 * uniform01(rng) - 1.0;
      im = 2.0 * uniform01(rng) - 1.0;
    } while (re * re + im * im >= 1.0);
    v = {re, im};
  }
  return SignalVector::complex(std::move(x));
}

OversampleSensitivity oversample_sensitivity(int n_symbols, SignalDomain domain, int oversample,
                                             int n_draws, std::uint64_t seed) {
  BandlimitInterpolator coarse(domain, n_symbols, oversample);
  BandlimitInterpolator fine(domain, n_symbols, 2 * oversample);
  OversampleSensitivity out;
  out.oversample = oversample;
  out.n_draws = n_draws;
  double sum = 0.0;
  for (int i = 0; i < n_draws; ++i) {
    auto rng = make_substream(seed, 0x5e45, static_cast<std::uint64_t>(i));
    auto x = draw_gaussian_direction(n_symbols, domain, rng);
    const double rel = fine.peak(x) / coarse.peak(x) - 1.0;
    sum += rel;
    out.max_relative_increase = std::max(out.max_relative_increase, rel);
  }
  out.mean_relative_increase = n_draws > 0 ? sum / n_draws : 0.0;
  return out;
}

void write_waveform_csv(std::ostream& out, const Waveform& waveform) {
  const auto old_precision = out.precision(17);
  if (waveform.domain == SignalDomain::Real) {
    out << "index,value\n";
    for (std::size_t i = 0; i < waveform.real.size(); ++i) out << i << ',' << waveform.real[i] << '\n';
  } else {
    out << "index,re,im\n";
    for (std::size_t i = 0; i < waveform.complex.size(); ++i)
      out << i << ',' << waveform.complex[i].real() << ',' << waveform.complex[i].imag() << '\n';
  }
  out.precision(old_precision);
}

}  // namespace pplcap
