#include "pplcap/extreme_stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "pplcap/parallel.hpp"
#include "pplcap/rng.hpp"
#include "pplcap/signal_synthesis.hpp"

namespace pplcap {

std::string_view to_string(MaxLaw law) {
  switch (law) {
    case MaxLaw::DiscreteReal: return "discrete-real";
    case MaxLaw::ContinuousReal: return "continuous-real";
    case MaxLaw::DiscreteComplex: return "discrete-complex";
    case MaxLaw::ContinuousComplex: return "continuous-complex";
  }
  return "unknown";
}

ExtremeValueModel ExtremeValueModel::discrete(SignalDomain domain, int n_symbols) {
  ExtremeValueModel m{domain == SignalDomain::Real ? MaxLaw::DiscreteReal : MaxLaw::DiscreteComplex,
                      n_symbols, 1.0};
  m.validate();
  return m;
}

ExtremeValueModel ExtremeValueModel::continuous(SignalDomain domain, int n_symbols, double alpha) {
  ExtremeValueModel m{domain == SignalDomain::Real ? MaxLaw::ContinuousReal : MaxLaw::ContinuousComplex,
                      n_symbols, alpha};
  m.validate();
  return m;
}

SignalDomain ExtremeValueModel::domain() const {
  return (law == MaxLaw::DiscreteReal || law == MaxLaw::ContinuousReal) ? SignalDomain::Real
                                                                         : SignalDomain::Complex;
}

bool ExtremeValueModel::is_continuous() const {
  return law == MaxLaw::ContinuousReal || law == MaxLaw::ContinuousComplex;
}

void ExtremeValueModel::validate() const {
  if (n_symbols < 1) throw std::domain_error("ExtremeValueModel: n_symbols must be >= 1");
  if (!is_continuous() && alpha != 1.0)
    throw std::domain_error("ExtremeValueModel: alpha must be exactly 1 for discrete laws");
  if (is_continuous() && !(alpha >= 1.0 && alpha <= 4.0))
    throw std::domain_error("ExtremeValueModel: alpha must lie in [1, 4]");
}

double default_alpha(int n_symbols) {
  static constexpr std::array<std::pair<double, double>, 4> table{
      {{101.0, 2.3}, {1001.0, 2.8}, {10001.0, 2.9}, {100001.0, 2.9}}};
  if (n_symbols < 1) throw std::domain_error("default_alpha: n_symbols must be >= 1");
  const double ln = std::log(static_cast<double>(n_symbols));
  double best = table[0].second;
  double best_dist = std::numeric_limits<double>::infinity();
  for (auto [n, a] : table) {
    const double d = std::abs(std::log(n) - ln);
    if (d < best_dist) {
      best_dist = d;
      best = a;
    }
  }
  return best;
}

namespace {

// log of the single-variable CDF: log(1 - 2Q(z)) for real, log(1 - e^-w) for complex
double log_unit_cdf(SignalDomain domain, double v) {
  if (domain == SignalDomain::Real) {
    const double s = v / std::numbers::sqrt2;
    return v < 1.0 ? std::log(std::erf(s)) : std::log1p(-std::erfc(s));
  }
  return std::log(-std::expm1(-v));
}

void check_argument(double v) {
  if (!(v > 0.0)) throw std::domain_error("maxima law: argument must be positive");
}

}  // namespace

double log_max_pdf(const ExtremeValueModel& model, double v) {
  check_argument(v);
  const double k = model.effective_count();
  const auto domain = model.domain();
  const double body = (k - 1.0) * log_unit_cdf(domain, v);
  if (domain == SignalDomain::Real) {
    // 2 phi(z): density of |x|
    return std::log(k) + body + 0.5 * std::log(2.0 / std::numbers::pi) - 0.5 * v * v;
  }
  return std::log(k) + body - v;
}

double max_pdf(const ExtremeValueModel& model, double v) { return std::exp(log_max_pdf(model, v)); }

double log_max_cdf(const ExtremeValueModel& model, double v) {
  check_argument(v);
  return model.effective_count() * log_unit_cdf(model.domain(), v);
}

double max_cdf(const ExtremeValueModel& model, double v) { return std::exp(log_max_cdf(model, v)); }

double max_quantile(const ExtremeValueModel& model, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("max_quantile: p must lie in (0, 1)");
  const double target = std::log(p);
  double lo = 1.0;
  double hi = 1.0;
  while (log_max_cdf(model, lo) >= target) lo *= 0.5;
  while (log_max_cdf(model, hi) < target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_max_cdf(model, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

double EmpiricalMaxHistogram::density(std::size_t bin) const {
  const double width = bin_edges.at(bin + 1) - bin_edges.at(bin);
  return static_cast<double>(counts.at(bin)) / (static_cast<double>(n_trials) * width);
}

void EmpiricalMaxHistogram::write_csv(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "bin_left,bin_right,count,density\n";
  for (std::size_t i = 0; i < counts.size(); ++i)
    out << bin_edges[i] << ',' << bin_edges[i + 1] << ',' << counts[i] << ',' << density(i) << '\n';
  out.precision(old);
}

namespace {

constexpr std::size_t kTrialChunk = 4096;
constexpr int kHistogramBins = 200;
constexpr std::uint64_t kMaxStream = 0x6d61786c;  // substream tag for maxima trials
constexpr std::uint64_t kMomentStream = 0x6d6f6d74;

unsigned resolve_workers(unsigned workers) { return workers == 0 ? default_workers() : workers; }

}  // namespace

EmpiricalMaxHistogram simulate_max_distribution(int n_symbols, int oversample, SignalDomain domain,
                                                std::uint64_t n_trials, std::uint64_t seed,
                                                unsigned workers) {
  if (n_symbols < 2) throw std::domain_error("simulate_max_distribution: n_symbols must be >= 2");
  if (oversample < 1) throw std::domain_error("simulate_max_distribution: oversample must be >= 1");
  if (n_trials < 1000) throw std::domain_error("simulate_max_distribution: need at least 1000 trials");
  if (n_trials > (std::uint64_t{1} << 31) ||
      static_cast<std::uint64_t>(n_symbols) * static_cast<std::uint64_t>(oversample) > (std::uint64_t{1} << 26))
    throw std::length_error("simulate_max_distribution: request exceeds resource limits");

  EmpiricalMaxHistogram h;
  h.n_trials = n_trials;
  h.n_symbols = n_symbols;
  h.oversample = oversample;
  h.domain = domain;
  h.maxima.resize(n_trials);

  workers = resolve_workers(workers);
  std::vector<std::optional<BandlimitInterpolator>> interp(workers);
  const std::size_t n_chunks = (n_trials + kTrialChunk - 1) / kTrialChunk;
  parallel_chunks(n_chunks, workers, [&](unsigned worker, std::size_t chunk) {
    if (oversample > 1 && !interp[worker]) interp[worker].emplace(domain, n_symbols, oversample);
    const std::uint64_t begin = chunk * kTrialChunk;
    const std::uint64_t end = std::min<std::uint64_t>(n_trials, begin + kTrialChunk);
    for (std::uint64_t t = begin; t < end; ++t) {
      auto rng = make_substream(seed, kMaxStream, t);
      auto x = draw_gaussian_direction(n_symbols, domain, rng);
      const double peak = oversample > 1 ? interp[worker]->peak(x) : x.max_abs();
      h.maxima[t] = domain == SignalDomain::Real ? peak : peak * peak;
    }
    return true;
  });
  std::sort(h.maxima.begin(), h.maxima.end());

  const auto law = oversample == 1 ? ExtremeValueModel::discrete(domain, n_symbols)
                                   : ExtremeValueModel::continuous(domain, n_symbols, default_alpha(n_symbols));
  const double lo = std::min(max_quantile(law, 1e-6), h.maxima.front());
  const double hi = std::max(max_quantile(law, 1.0 - 1e-6), h.maxima.back());
  h.bin_edges.resize(kHistogramBins + 1);
  for (int i = 0; i <= kHistogramBins; ++i) h.bin_edges[i] = lo + (hi - lo) * i / kHistogramBins;
  h.bin_edges.back() = hi;
  h.counts.assign(kHistogramBins, 0);
  for (double v : h.maxima) {
    auto bin = static_cast<int>((v - lo) / (hi - lo) * kHistogramBins);
    bin = std::clamp(bin, 0, kHistogramBins - 1);
    ++h.counts[bin];
  }
  return h;
}

double sup_cdf_distance(const std::vector<double>& sorted_maxima, const ExtremeValueModel& model) {
  const double n = static_cast<double>(sorted_maxima.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_maxima.size(); ++i) {
    const double f = max_cdf(model, sorted_maxima[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

AlphaFit calibrate_alpha(const EmpiricalMaxHistogram& histogram) {
  const auto domain = histogram.domain;
  const int n = histogram.n_symbols;
  auto distance = [&](double alpha) {
    return sup_cdf_distance(histogram.maxima, ExtremeValueModel::continuous(domain, n, alpha));
  };
  // coarse scan guards the golden-section search against the step noise of the ECDF
  double best = 1.0;
  double best_d = distance(1.0);
  for (double a = 1.05; a <= 4.0 + 1e-9; a += 0.05) {
    const double d = distance(std::min(a, 4.0));
    if (d < best_d) {
      best_d = d;
      best = std::min(a, 4.0);
    }
  }
  double a = std::max(1.0, best - 0.05);
  double b = std::min(4.0, best + 0.05);
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = distance(c);
  double fe = distance(e);
  while (b - a > 0.01) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = distance(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = distance(e);
    }
  }
  AlphaFit fit;
  fit.alpha = 0.5 * (a + b);
  fit.sup_distance = distance(fit.alpha);
  if (best_d < fit.sup_distance) {
    fit.alpha = best;
    fit.sup_distance = best_d;
  }
  if (fit.sup_distance > 0.05)
    throw NumericError("calibrate_alpha: no alpha in [1, 4] fits the simulated maxima", fit.sup_distance);
  return fit;
}

AlphaFit calibrate_alpha(int n_symbols, int oversample, SignalDomain domain, std::uint64_t n_trials,
                         std::uint64_t seed, unsigned workers) {
  return calibrate_alpha(simulate_max_distribution(n_symbols, oversample, domain, n_trials, seed, workers));
}

// ---------------------------------------------------------------------------

std::vector<ConditionalMomentBin> conditional_moment_check(SignalDomain domain, int n_symbols,
                                                           std::uint64_t n_tuples, std::uint64_t seed,
                                                           double lo, double hi, double bin_width,
                                                           std::uint64_t min_tuples, unsigned workers) {
  if (n_symbols < 2) throw std::domain_error("conditional_moment_check: n_symbols must be >= 2");
  if (!(lo > 0.0 && hi > lo && bin_width > 0.0))
    throw std::domain_error("conditional_moment_check: invalid range");

  struct Tuple {
    double max_value;
    double rest_sum;
  };
  std::vector<Tuple> tuples(n_tuples);
  const std::size_t n_chunks = (n_tuples + kTrialChunk - 1) / kTrialChunk;
  parallel_chunks(n_chunks, resolve_workers(workers), [&](unsigned, std::size_t chunk) {
    const std::uint64_t begin = chunk * kTrialChunk;
    const std::uint64_t end = std::min<std::uint64_t>(n_tuples, begin + kTrialChunk);
    std::vector<double> power(n_symbols);
    for (std::uint64_t t = begin; t < end; ++t) {
      auto rng = make_substream(seed, kMomentStream, t);
      auto x = draw_gaussian_direction(n_symbols, domain, rng);
      if (domain == SignalDomain::Real) {
        auto s = x.real_samples();
        for (int i = 0; i < n_symbols; ++i) power[i] = s[i] * s[i];
      } else {
        auto s = x.complex_samples();
        for (int i = 0; i < n_symbols; ++i) power[i] = std::norm(s[i]);
      }
      const auto top = std::max_element(power.begin(), power.end());
      double rest = 0.0;
      for (auto it = power.begin(); it != power.end(); ++it)
        if (it != top) rest += *it;
      const double v = domain == SignalDomain::Real ? std::sqrt(*top) : *top;
      tuples[t] = {v, rest};
    }
    return true;
  });

  // fine bins, then greedy merging until each bin holds min_tuples
  const int n_fine = std::max(1, static_cast<int>(std::ceil((hi - lo) / bin_width - 1e-9)));
  std::vector<std::uint64_t> fine_counts(n_fine, 0);
  for (const auto& t : tuples) {
    if (t.max_value < lo || t.max_value >= hi) continue;
    const int b = std::min(n_fine - 1, static_cast<int>((t.max_value - lo) / bin_width));
    ++fine_counts[b];
  }
  std::vector<double> edges{lo};
  std::uint64_t acc = 0;
  for (int b = 0; b < n_fine; ++b) {
    acc += fine_counts[b];
    if (acc >= min_tuples) {
      edges.push_back(std::min(hi, lo + (b + 1) * bin_width));
      acc = 0;
    }
  }
  if (edges.size() == 1) {
    edges.push_back(hi);
  } else if (edges.back() < hi) {
    edges.back() = hi;  // fold the under-populated tail into the last bin
  }

  std::vector<ConditionalMomentBin> bins(edges.size() - 1);
  std::vector<double> rest_sum(bins.size(), 0.0);
  std::vector<double> predicted_sum(bins.size(), 0.0);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    bins[i].lo = edges[i];
    bins[i].hi = edges[i + 1];
  }
  for (const auto& t : tuples) {
    if (t.max_value < lo || t.max_value >= hi) continue;
    const auto it = std::upper_bound(edges.begin(), edges.end(), t.max_value);
    const std::size_t b = std::min<std::size_t>(bins.size() - 1, static_cast<std::size_t>(it - edges.begin()) - 1);
    ++bins[b].n_tuples;
    rest_sum[b] += t.rest_sum;
    predicted_sum[b] += domain == SignalDomain::Real ? truncated_gaussian_variance(t.max_value)
                                                     : truncated_exponential_mean(t.max_value);
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].n_tuples == 0) continue;
    const double n = static_cast<double>(bins[i].n_tuples);
    bins[i].empirical = rest_sum[i] / (n * (n_symbols - 1));
    bins[i].predicted = predicted_sum[i] / n;
  }
  return bins;
}

}  // namespace pplcap
