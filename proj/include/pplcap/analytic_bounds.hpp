#pragma once

#include <vector>

#include "pplcap/common.hpp"
#include "pplcap/extreme_stats.hpp"

namespace pplcap {

/// Peak-power-limited AWGN channel.
struct ChannelModel {
  SignalDomain domain = SignalDomain::Real;
  double peak_power = 1.0;     // P [W]
  double bandwidth = 1.0;      // B [Hz]
  double noise_density = 1.0;  // N0 [W/Hz]

  void validate() const;
  double noise_power() const { return noise_density * bandwidth; }
  double snr() const { return peak_power / (bandwidth * noise_density); }
  /// 0.5/B for real low-pass signals, 1/B for complex band-pass.
  double nyquist_interval() const { return domain == SignalDomain::Real ? 0.5 / bandwidth : 1.0 / bandwidth; }
};

/// Capacity curves in bits per Nyquist interval.
struct BoundCurve {
  std::vector<double> snr_grid;
  std::vector<double> apl_capacity;
  std::vector<double> ppl_lower_bound;
  double gamma_used = 1.0;
};

/// Peak-normalized length of the typical vector whose maximum equals v:
/// real    L(z) = sqrt(Var(z) (N-1) / z^2 + 1)
/// complex L(w) = sqrt(E(w) (N-1) / w + 1)
double radial_length(const ExtremeValueModel& model, double v);

/// log p(v) + d log L(v) with d the body dimension.
double log_integrand(const ExtremeValueModel& model, double v);

/// Volume lower bound V = V_d^u * integral p(v) L(v)^d dv, evaluated in the
/// log domain at unit peak power. `rel_tolerance` targets the integral.
VolumeEstimate log_volume_lower_bound(const ExtremeValueModel& model, double rel_tolerance = 1e-8);

/// Integrand normalized to its maximum over the grid.
std::vector<double> integrand_profile(const ExtremeValueModel& model, const std::vector<double>& grid);

/// Location of the integrand maximum.
double integrand_argmax(const ExtremeValueModel& model);

/// gamma obtained when blocks whose maximum falls in the lowest q of the
/// maxima law are discarded, for each q in `quantile_grid`.
std::vector<double> truncated_gamma_curve(const ExtremeValueModel& model, const std::vector<double>& quantile_grid);

/// Smallest number of Gaussian directions 1/q for which discarding the
/// lowest-q maxima keeps gamma within `rel_tolerance` of the untruncated
/// value; +inf when no q >= 1e-16 qualifies.
double predicted_sample_budget(const ExtremeValueModel& model, double rel_tolerance = 0.01);

BoundCurve capacity_lower_bound(const ChannelModel& channel, double gamma, const std::vector<double>& snr_grid);

/// gamma when only the Nyquist samples are peak limited: 2/(pi e) for real,
/// 1/e for complex.
double sampled_only_upper_bound(SignalDomain domain);

}  // namespace pplcap
