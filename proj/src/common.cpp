#include "pplcap/common.hpp"

#include <cmath>
#include <numbers>

namespace pplcap {

std::string_view to_string(SignalDomain domain) {
  return domain == SignalDomain::Real ? "real" : "complex";
}

SignalDomain parse_domain(std::string_view text) {
  if (text == "real") return SignalDomain::Real;
  if (text == "complex") return SignalDomain::Complex;
  throw std::invalid_argument("unknown domain '" + std::string(text) + "'");
}

std::string_view to_string(EstimateMethod method) {
  return method == EstimateMethod::Analytic ? "analytic" : "monte-carlo";
}

double gamma_from_log_volume(double log_volume, int n_symbols, SignalDomain domain,
                             double peak_power) {
  if (n_symbols < 1) throw std::domain_error("gamma_from_log_volume: n_symbols must be >= 1");
  if (!(peak_power > 0.0)) throw std::domain_error("gamma_from_log_volume: peak power must be positive");
  const double n = static_cast<double>(n_symbols);
  constexpr double e = std::numbers::e;
  constexpr double pi = std::numbers::pi;
  if (domain == SignalDomain::Real) return std::exp(2.0 / n * log_volume) / (2.0 * pi * e * peak_power);
  return std::exp(log_volume / n) / (pi * e * peak_power);
}

VolumeEstimate make_volume_estimate(double log_volume, int n_symbols, SignalDomain domain,
                                    EstimateMethod method) {
  VolumeEstimate est;
  est.n_symbols = n_symbols;
  est.body_dimension = body_dimension(domain, n_symbols);
  est.log_volume = LogValue::from_log(log_volume);
  est.gamma = gamma_from_log_volume(log_volume, n_symbols, domain);
  est.entropy_power = est.gamma;  // P = 1
  est.method = method;
  return est;
}

}  // namespace pplcap
