#include "pplcap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pplcap/analytic_bounds.hpp"
#include "pplcap/extreme_stats.hpp"
#include "pplcap/io.hpp"
#include "pplcap/rng.hpp"
#include "pplcap/signal_synthesis.hpp"
#include "pplcap/volume_mc.hpp"

namespace pplcap {

namespace {

constexpr double kPi = std::numbers::pi;

VerifyCheck at_most(std::string suite, std::string name, double measured, double threshold,
                    std::string detail = {}) {
  return {std::move(suite), std::move(name), measured, threshold, measured <= threshold, std::move(detail)};
}

std::string label(SignalDomain d, int n) { return std::string(to_string(d)) + " N=" + std::to_string(n); }

SignalVector random_signal(SignalDomain domain, int n, RngStream& rng) {
  return draw_gaussian_direction(n, domain, rng);
}

// Periodic trigonometric interpolation kernel at offset u (in sample units).
double dirichlet(int n, double u) {
  const double s = std::sin(kPi * u / n);
  if (std::abs(s) < 1e-15) return std::cos(kPi * u * (n - 1) / n) > 0 ? 1.0 : -1.0;
  if (n % 2 == 1) return std::sin(kPi * u) / (n * s);
  return std::sin(kPi * u) * std::cos(kPi * u / n) / (n * s);
}

double interpolation_error(SignalDomain domain, int n, int m, RngStream& rng) {
  BandlimitInterpolator interp(domain, n, m);
  const auto x = random_signal(domain, n, rng);
  const auto w = interp.interpolate(x);
  double worst = 0.0;
  for (int t = 0; t < n * m; ++t) {
    const double u = static_cast<double>(t) / m;
    if (domain == SignalDomain::Real) {
      double ref = 0.0;
      for (int k = 0; k < n; ++k) ref += x.real_samples()[k] * dirichlet(n, u - k);
      worst = std::max(worst, std::abs(ref - w.real[t]));
    } else {
      std::complex<double> ref = 0.0;
      for (int k = 0; k < n; ++k) ref += x.complex_samples()[k] * dirichlet(n, u - k);
      worst = std::max(worst, std::abs(ref - w.complex[t]));
    }
  }
  return worst;
}

double out_of_band_fraction(SignalDomain domain, int n, int m, RngStream& rng) {
  const auto x = random_signal(domain, n, rng);
  const auto w = bandlimit_interpolate(x, m);
  const int big = n * m;
  double in_band = 0.0;
  double out_band = 0.0;
  for (int k = 0; k < big; ++k) {
    std::complex<double> acc = 0.0;
    for (int t = 0; t < big; ++t) {
      const std::complex<double> v = domain == SignalDomain::Real ? std::complex<double>(w.real[t]) : w.complex[t];
      acc += v * std::polar(1.0, -2.0 * kPi * static_cast<double>(k) * t / big);
    }
    const int centered = k <= big / 2 ? k : k - big;
    (2 * std::abs(centered) <= n ? in_band : out_band) += std::norm(acc);
  }
  return out_band / (in_band + out_band);
}

double convexity_excess(SignalDomain domain, int n, int m, int pairs, RngStream& rng) {
  BandlimitInterpolator interp(domain, n, m);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = -1.0;
  for (int i = 0; i < pairs; ++i) {
    // both endpoints on the boundary of the body
    const auto a = peak_and_radius(random_signal(domain, n, rng), interp).signal;
    const auto b = peak_and_radius(random_signal(domain, n, rng), interp).signal;
    const double lam = u(rng);
    SignalVector mix = domain == SignalDomain::Real ? SignalVector::real({}) : SignalVector::complex({});
    if (domain == SignalDomain::Real) {
      std::vector<double> v(n);
      for (int k = 0; k < n; ++k) v[k] = lam * a.real_samples()[k] + (1 - lam) * b.real_samples()[k];
      mix = SignalVector::real(std::move(v));
    } else {
      std::vector<std::complex<double>> v(n);
      for (int k = 0; k < n; ++k) v[k] = lam * a.complex_samples()[k] + (1 - lam) * b.complex_samples()[k];
      mix = SignalVector::complex(std::move(v));
    }
    worst = std::max(worst, interp.peak(mix) - 1.0);
  }
  return worst;
}

}  // namespace

std::vector<VerifyCheck> verify_anchors(const VerifyOptions& options) {
  std::vector<VerifyCheck> out;
  RunOptions run{options.workers, 0.0, false};
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    const double exact = sampled_only_upper_bound(domain);
    for (int n : {11, 51, 101}) {
      McConfig c;
      c.domain = domain;
      c.n_symbols = n;
      c.oversample = 1;
      c.n_sim = 10'000;
      c.sampler = Sampler::ImportanceUniform;
      c.seed = options.seed;
      const auto r = estimate_volume_mc(c, run);
      out.push_back(at_most("anchors", "gamma " + label(domain, n), std::abs(r.estimate.gamma / exact - 1.0), 1e-9,
                            "gamma=" + format_double(r.estimate.gamma)));
      out.push_back(at_most("anchors", "variance " + label(domain, n),
                            std::max(r.relative_variance, r.contribution_spread), 0.0));
    }
  }
  McConfig c;
  c.n_symbols = 8;
  c.oversample = 1;
  c.n_sim = 1'000'000;
  c.sampler = Sampler::GaussianDirection;
  c.seed = options.seed;
  const auto r = estimate_volume_mc(c, run);
  const double se = r.estimate.gamma_stderr.value_or(0.0);
  const double exact = sampled_only_upper_bound(SignalDomain::Real);
  out.push_back(at_most("anchors", "cube volume z-score real N=8", std::abs(r.estimate.gamma - exact) / se, 3.0,
                        "gamma=" + format_double(r.estimate.gamma)));
  out.push_back(at_most("anchors", "cube volume stderr real N=8", se / r.estimate.gamma, 0.02));
  return out;
}

std::vector<VerifyCheck> verify_stats(const VerifyOptions& options) {
  std::vector<VerifyCheck> out;
  auto moment_check = [&](SignalDomain domain, double lo, double hi, double width) {
    const auto bins = conditional_moment_check(domain, 100, 1'000'000, options.seed, lo, hi, width, 1000, options.workers);
    double worst = 0.0;
    for (const auto& b : bins) worst = std::max(worst, std::abs(b.relative_error()));
    out.push_back(at_most("stats", "conditional moment " + label(domain, 100), worst, 0.02,
                          std::to_string(bins.size()) + " bins"));
  };
  moment_check(SignalDomain::Real, 1.5, 4.0, 0.1);
  moment_check(SignalDomain::Complex, 2.25, 16.0, 0.25);

  const std::uint64_t trials = 100'000;
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    const auto h = simulate_max_distribution(101, 1, domain, trials, options.seed, options.workers);
    const double d = sup_cdf_distance(h.maxima, ExtremeValueModel::discrete(domain, 101));
    out.push_back(at_most("stats", "discrete maxima law " + label(domain, 101), d, 3.0 / std::sqrt(trials)));
  }
  return out;
}

std::vector<VerifyCheck> verify_invariants(const VerifyOptions& options) {
  std::vector<VerifyCheck> out;
  auto rng = make_substream(options.seed, 0x696e76, 0);

  double convex = -1.0;
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex})
    convex = std::max(convex, convexity_excess(domain, 21, 16, 500, rng));
  out.push_back(at_most("invariants", "convexity (1000 pairs)", convex, 1e-12));

  double exact = 0.0;
  double leak = 0.0;
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    for (int n : {15, 16}) {
      exact = std::max(exact, interpolation_error(domain, n, 8, rng));
      leak = std::max(leak, out_of_band_fraction(domain, n, 4, rng));
    }
  }
  out.push_back(at_most("invariants", "interpolation exactness", exact, 1e-12));
  out.push_back(at_most("invariants", "spectral confinement", leak, 1e-10));

  double scale = 0.0;
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    for (int n : {2, 51, 1001}) {
      for (auto model : {ExtremeValueModel::discrete(domain, n), ExtremeValueModel::continuous(domain, n, default_alpha(n))}) {
        const auto e = log_volume_lower_bound(model);
        const double lv4 = e.log_volume.log() + 0.5 * e.body_dimension * std::log(4.0);
        scale = std::max(scale, std::abs(gamma_from_log_volume(lv4, n, domain, 4.0) / e.gamma - 1.0));
      }
    }
  }
  out.push_back(at_most("invariants", "gamma scale invariance", scale, 1e-12));

  std::vector<double> grid(50);
  for (int i = 0; i < 50; ++i) grid[i] = std::pow(10.0, -2.0 + 6.0 * i / 49.0);
  int violations = 0;
  double gap_error = 0.0;
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    for (double g : {0.15, 0.18, 0.2342, 0.29}) {
      ChannelModel ch;
      ch.domain = domain;
      const auto c = capacity_lower_bound(ch, g, grid);
      for (int i = 0; i < 50; ++i) {
        if (c.ppl_lower_bound[i] > c.apl_capacity[i]) ++violations;
        if (i > 0 && !(c.apl_capacity[i] > c.apl_capacity[i - 1] && c.ppl_lower_bound[i] > c.ppl_lower_bound[i - 1]))
          ++violations;
        if (i > 0 && c.apl_capacity[i] - c.ppl_lower_bound[i] < c.apl_capacity[i - 1] - c.ppl_lower_bound[i - 1])
          ++violations;
      }
      const double s = domain == SignalDomain::Real ? 0.5 : 1.0;
      gap_error = std::max(gap_error, std::abs(c.apl_capacity.back() - c.ppl_lower_bound.back() - s * std::log2(1.0 / g)));
    }
  }
  out.push_back(at_most("invariants", "bound curve ordering", violations, 0.0));
  out.push_back(at_most("invariants", "bound curve high-SNR gap", gap_error, 1e-3));

  int mismatches = 0;
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    McConfig c;
    c.domain = domain;
    c.n_symbols = 21;
    c.oversample = 8;
    c.n_sim = 3 * kMcChunk + 1000;
    c.seed = options.seed;
    std::string reference;
    for (unsigned w : {1u, 4u, 16u}) {
      const auto text = to_json(estimate_volume_mc(c, {w, 0.0, true}), false).dump();
      if (reference.empty()) reference = text;
      else if (text != reference) ++mismatches;
    }
    std::vector<double> maxima;
    for (unsigned w : {1u, 4u, 16u}) {
      const auto h = simulate_max_distribution(21, 8, domain, 10'000, options.seed, w);
      if (maxima.empty()) maxima = h.maxima;
      else if (h.maxima != maxima) ++mismatches;
    }
  }
  out.push_back(at_most("invariants", "worker determinism (1/4/16)", mismatches, 0.0));
  return out;
}

bool all_passed(const std::vector<VerifyCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

void write_verify_report(const std::filesystem::path& path, const std::vector<VerifyCheck>& checks) {
  CsvWriter csv(path, {"suite", "check", "measured", "threshold", "passed", "detail"});
  for (const auto& c : checks) {
    csv.cell(c.suite).cell(c.name).cell(c.measured).cell(c.threshold).cell(std::string(c.passed ? "pass" : "fail"));
    csv.cell(c.detail);
    csv.end_row();
  }
  csv.close();
}

}  // namespace pplcap
