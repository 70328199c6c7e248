#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pplcap/core_math.hpp"

namespace pplcap {

/// Real low-pass signals (one real dimension per Nyquist sample) or complex
/// band-pass baseband signals (two real dimensions per sample).
enum class SignalDomain { Real, Complex };

std::string_view to_string(SignalDomain domain);
SignalDomain parse_domain(std::string_view text);

/// Dimension of the body in sample space: N for real, 2N for complex.
inline int body_dimension(SignalDomain domain, int n_symbols) {
  return domain == SignalDomain::Real ? n_symbols : 2 * n_symbols;
}

/// Raised when a numerical routine cannot meet its accuracy contract.
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

enum class EstimateMethod { Analytic, MonteCarlo };
std::string_view to_string(EstimateMethod method);

/// Volume of the peak-limited body evaluated at unit peak power, with the
/// derived power-efficiency factor.
struct VolumeEstimate {
  int n_symbols = 0;
  int body_dimension = 0;
  LogValue log_volume;
  double gamma = 0.0;
  double entropy_power = 0.0;
  EstimateMethod method = EstimateMethod::Analytic;
  std::optional<double> gamma_stderr;
};

/// gamma = Pe / P with Pe the entropy power of the uniform law on the body.
/// Real:    exp((2/N) log V) / (2 pi e P)
/// Complex: exp((1/N) log V) / (pi e P)
double gamma_from_log_volume(double log_volume, int n_symbols, SignalDomain domain,
                             double peak_power = 1.0);

VolumeEstimate make_volume_estimate(double log_volume, int n_symbols, SignalDomain domain,
                                    EstimateMethod method);

}  // namespace pplcap
