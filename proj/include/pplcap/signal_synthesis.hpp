#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pplcap/common.hpp"
#include "pplcap/rng.hpp"

namespace pplcap {

/// N Nyquist-rate samples of one block, real or complex.
class SignalVector {
public:
  static SignalVector real(std::vector<double> samples);
  static SignalVector complex(std::vector<std::complex<double>> samples);

  SignalDomain domain() const { return domain_; }
  int n_symbols() const;
  std::span<const double> real_samples() const;
  std::span<const std::complex<double>> complex_samples() const;

  /// Euclidean norm over all real dimensions.
  double norm() const;
  /// max_i |x_i| (modulus for complex samples).
  double max_abs() const;
  void scale(double factor);

private:
  SignalDomain domain_ = SignalDomain::Real;
  std::vector<double> real_;
  std::vector<std::complex<double>> complex_;
};

/// M*N points of the periodic band-limited waveform over one block.
struct Waveform {
  SignalDomain domain = SignalDomain::Real;
  std::vector<double> real;
  std::vector<std::complex<double>> complex;

  std::size_t size() const { return domain == SignalDomain::Real ? real.size() : complex.size(); }
  double max_abs() const;
};

/// Brick-wall periodic interpolation by spectral zero padding.
///
/// Holds FFTW plans and aligned buffers for one (domain, N, M) triple; an
/// instance is meant to be owned by a single worker. Plan creation is
/// serialized internally.
class BandlimitInterpolator {
public:
  BandlimitInterpolator(SignalDomain domain, int n_symbols, int oversample);
  ~BandlimitInterpolator();
  BandlimitInterpolator(BandlimitInterpolator&&) noexcept;
  BandlimitInterpolator& operator=(BandlimitInterpolator&&) noexcept;
  BandlimitInterpolator(const BandlimitInterpolator&) = delete;
  BandlimitInterpolator& operator=(const BandlimitInterpolator&) = delete;

  SignalDomain domain() const;
  int n_symbols() const;
  int oversample() const;

  Waveform interpolate(const SignalVector& signal);

  /// max_t |x(t)| over the interpolation grid. With refine, a parabola through
  /// the grid maximum and its neighbours is used to estimate the off-grid peak.
  double peak(const SignalVector& signal, bool refine = false);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Waveform bandlimit_interpolate(const SignalVector& signal, int oversample);

/// Geometry of one direction through the peak-limited body.
struct DirectionDraw {
  SignalVector signal;          // rescaled so that the waveform peak is 1
  double radial_distance = 0;   // r = ||x|| / waveform peak
  double sample_peak = 0;       // max_i |x_i| before rescaling
  double waveform_peak = 0;     // interpolated peak before rescaling
  std::optional<double> cube_dfo;
  std::optional<LogValue> importance_weight_log;
};

DirectionDraw peak_and_radius(SignalVector signal, int oversample);
DirectionDraw peak_and_radius(SignalVector signal, BandlimitInterpolator& interpolator,
                              bool refine_peak = false);

/// Distance from the origin to the unit cube (real) or unit polydisc
/// (complex) surface along the signal's direction: ||x|| / max_i |x_i|.
double cube_dfo(const SignalVector& signal);

/// Change-of-measure factor between uniform-on-sphere directions and
/// directions of a point uniform in the cube / polydisc.
LogValue importance_weight(double cube_dfo, int n_symbols, SignalDomain domain);

/// i.i.d. unit-power Gaussian samples; complex parts have variance 1/2 each.
SignalVector draw_gaussian_direction(int n_symbols, SignalDomain domain, RngStream& rng);

/// Uniform in [-1, 1]^N (real) or uniform on the unit disk per sample (complex).
SignalVector draw_importance_uniform(int n_symbols, SignalDomain domain, RngStream& rng);

/// Peak growth when the interpolation grid is refined from M to 2M.
struct OversampleSensitivity {
  int oversample = 0;
  int n_draws = 0;
  double mean_relative_increase = 0;
  double max_relative_increase = 0;
};

OversampleSensitivity oversample_sensitivity(int n_symbols, SignalDomain domain, int oversample,
                                             int n_draws, std::uint64_t seed);

/// Debug dump: "index,value" or "index,re,im".
void write_waveform_csv(std::ostream& out, const Waveform& waveform);

}  // namespace pplcap
