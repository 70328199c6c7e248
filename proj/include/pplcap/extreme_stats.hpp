#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "pplcap/common.hpp"

namespace pplcap {

/// Which law is used for the block maximum.
///
/// Real laws describe z = max |x|; complex laws describe w = max |x|^2 of
/// unit-power samples. Continuous laws replace the N i.i.d. samples by
/// alpha*N effective ones to account for the peaks between Nyquist samples.
enum class MaxLaw { DiscreteReal, ContinuousReal, DiscreteComplex, ContinuousComplex };

std::string_view to_string(MaxLaw law);

struct ExtremeValueModel {
  MaxLaw law = MaxLaw::DiscreteReal;
  int n_symbols = 1;
  double alpha = 1.0;

  static ExtremeValueModel discrete(SignalDomain domain, int n_symbols);
  static ExtremeValueModel continuous(SignalDomain domain, int n_symbols, double alpha);

  SignalDomain domain() const;
  bool is_continuous() const;
  double effective_count() const { return alpha * n_symbols; }
  /// Throws std::domain_error when the invariants do not hold.
  void validate() const;
};

/// Oversampling-equivalence factor for a continuous waveform of N Nyquist
/// intervals, taken from the nearest tabulated N on a log scale
/// (2.3 @ 101, 2.8 @ 1001, 2.9 @ 10001 and 100001). Between tabulated
/// points this is a heuristic.
double default_alpha(int n_symbols);

double log_max_pdf(const ExtremeValueModel& model, double v);
double max_pdf(const ExtremeValueModel& model, double v);
double log_max_cdf(const ExtremeValueModel& model, double v);
double max_cdf(const ExtremeValueModel& model, double v);
/// v with max_cdf(v) = p, by bisection in the log domain.
double max_quantile(const ExtremeValueModel& model, double p);

/// Histogram of simulated block maxima, with the sorted maxima kept for
/// distribution-free goodness-of-fit checks.
struct EmpiricalMaxHistogram {
  std::vector<double> bin_edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_trials = 0;
  int n_symbols = 0;
  int oversample = 1;
  SignalDomain domain = SignalDomain::Real;
  std::vector<double> maxima;  // ascending

  double density(std::size_t bin) const;
  /// CSV: bin_left,bin_right,count,density
  void write_csv(std::ostream& out) const;
};

/// Simulates max |x(t)| (real) or max |x(t)|^2 (complex) of unit-power
/// Gaussian blocks, band-limited at `oversample` points per Nyquist interval.
/// Trial i always uses the same random substream, so results do not depend
/// on `workers`.
EmpiricalMaxHistogram simulate_max_distribution(int n_symbols, int oversample, SignalDomain domain,
                                                std::uint64_t n_trials, std::uint64_t seed,
                                                unsigned workers = 0);

/// Kolmogorov distance between the empirical maxima and the model CDF.
double sup_cdf_distance(const std::vector<double>& sorted_maxima, const ExtremeValueModel& model);

struct AlphaFit {
  double alpha = 1.0;
  double sup_distance = 0.0;
};

/// Golden-section search of alpha in [1, 4] minimizing the sup-norm CDF
/// distance. Throws NumericError when the best distance exceeds 0.05.
AlphaFit calibrate_alpha(const EmpiricalMaxHistogram& histogram);
AlphaFit calibrate_alpha(int n_symbols, int oversample, SignalDomain domain, std::uint64_t n_trials,
                         std::uint64_t seed, unsigned workers = 0);

/// One bin of the conditional-moment comparison: second moment of the
/// non-maximal samples given the block maximum, simulated versus predicted.
struct ConditionalMomentBin {
  double lo = 0;
  double hi = 0;
  std::uint64_t n_tuples = 0;
  double empirical = 0;
  double predicted = 0;
  double relative_error() const { return empirical / predicted - 1.0; }
};

/// Simulates i.i.d. unit-power N-tuples, groups them by their maximum
/// (z = max|x| for real, w = max|x|^2 for complex) over [lo, hi] in bins of
/// `bin_width`, merging neighbours until each holds `min_tuples`, and compares
/// the mean square (real) or mean power (complex) of the N-1 remaining samples
/// with the truncated-moment prediction evaluated per tuple.
std::vector<ConditionalMomentBin> conditional_moment_check(SignalDomain domain, int n_symbols,
                                                           std::uint64_t n_tuples, std::uint64_t seed,
                                                           double lo, double hi, double bin_width,
                                                           std::uint64_t min_tuples,
                                                           unsigned workers = 0);

}  // namespace pplcap
