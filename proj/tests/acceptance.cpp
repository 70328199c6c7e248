// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pplcap/analytic_bounds.hpp"
#include "pplcap/extreme_stats.hpp"
#include "pplcap/io.hpp"
#include "pplcap/rng.hpp"
#include "pplcap/verification.hpp"
#include "pplcap/volume_mc.hpp"

using namespace pplcap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

McConfig mc_config(SignalDomain domain, int n, int m, std::uint64_t n_sim, Sampler sampler) {
  McConfig c;
  c.domain = domain;
  c.n_symbols = n;
  c.oversample = m;
  c.n_sim = n_sim;
  c.sampler = sampler;
  c.seed = kDefaultSeed;
  return c;
}

Outcome discrete_anchors() {
  Outcome o{true, ""};
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    const double exact = sampled_only_upper_bound(domain);
    for (int n : {11, 51, 101}) {
      const auto t0 = Clock::now();
      const auto r = estimate_volume_mc(mc_config(domain, n, 1, 1'000'000, Sampler::ImportanceUniform));
      const double t = seconds_since(t0);
      const double err = std::abs(r.estimate.gamma / exact - 1.0);
      const bool ok = err <= 1e-9 && r.relative_variance == 0.0 && r.contribution_spread == 0.0 && t < 5.0;
      o.pass = o.pass && ok;
      o.detail += std::string(to_string(domain)) + " N=" + std::to_string(n) + " relerr=" + fmt(err, 2) +
                  " var=" + fmt(r.relative_variance, 2) + " t=" + fmt(t, 3) + "s; ";
    }
  }
  return o;
}

Outcome cube_volume() {
  const auto t0 = Clock::now();
  const auto r = estimate_volume_mc(mc_config(SignalDomain::Real, 8, 1, 1'000'000, Sampler::GaussianDirection));
  const double t = seconds_since(t0);
  const double g = r.estimate.gamma;
  const double se = r.estimate.gamma_stderr.value_or(0.0);
  const double exact = sampled_only_upper_bound(SignalDomain::Real);
  const bool ok = se > 0.0 && std::abs(g - exact) <= 3.0 * se && se / g < 0.02 && t < 60.0;
  return {ok, "gamma=" + fmt(g) + " stderr=" + fmt(se, 3) + " (" + fmt(100 * se / g, 3) + "%) |dev|/se=" +
                  fmt(std::abs(g - exact) / se, 3) + " t=" + fmt(t, 3) + "s"};
}

Outcome analytic_asymptotes() {
  const auto t0 = Clock::now();
  const double real = log_volume_lower_bound(ExtremeValueModel::continuous(SignalDomain::Real, 10000, 2.9)).gamma;
  const double t_real = seconds_since(t0);
  const auto t1 = Clock::now();
  const double cplx = log_volume_lower_bound(ExtremeValueModel::continuous(SignalDomain::Complex, 10000, 2.9)).gamma;
  const double t_cplx = seconds_since(t1);
  const bool real_floor = real >= 0.15;
  const bool real_band = std::abs(real - 0.15) <= 0.01;
  const bool cplx_band = std::abs(cplx - 0.245) <= 0.01;
  const bool ok = real_floor && real_band && cplx_band && t_real < 60.0 && t_cplx < 60.0;
  return {ok, "real gamma=" + fmt(real, 8) + (real_floor ? " (>=0.15)" : " (below 0.15)") +
                  (real_band ? " within 0.15+-0.01" : " outside 0.15+-0.01") + "; complex gamma=" + fmt(cplx, 8) +
                  (cplx_band ? " within 0.245+-0.01" : " outside 0.245+-0.01") + "; t=" + fmt(t_real, 2) + "s/" +
                  fmt(t_cplx, 2) + "s"};
}

Outcome truncated_moments() {
  const auto t0 = Clock::now();
  const auto real = conditional_moment_check(SignalDomain::Real, 100, 1'000'000, kDefaultSeed, 1.5, 4.0, 0.1, 1000);
  const auto cplx = conditional_moment_check(SignalDomain::Complex, 100, 1'000'000, kDefaultSeed + 1, 2.25, 16.0, 0.25, 1000);
  const double t = seconds_since(t0);
  auto worst = [](const std::vector<ConditionalMomentBin>& bins) {
    double w = 0.0;
    for (const auto& b : bins) w = std::max(w, std::abs(b.relative_error()));
    return w;
  };
  const double wr = worst(real);
  const double wc = worst(cplx);
  const bool ok = !real.empty() && !cplx.empty() && wr < 0.02 && wc < 0.02 && t < 120.0;
  return {ok, "real max relerr=" + fmt(wr, 3) + " over " + std::to_string(real.size()) + " bins; complex max relerr=" +
                  fmt(wc, 3) + " over " + std::to_string(cplx.size()) + " bins; t=" + fmt(t, 3) + "s"};
}

Outcome maxima_law() {
  const auto t0 = Clock::now();
  const auto fit = calibrate_alpha(1001, 30, SignalDomain::Real, 100'000, kDefaultSeed);
  const double t = seconds_since(t0);
  const bool ok = fit.alpha >= 2.6 && fit.alpha <= 3.0 && fit.sup_distance < 0.02 && t < 600.0;
  return {ok, "alpha=" + fmt(fit.alpha, 4) + " sup-distance=" + fmt(fit.sup_distance, 4) + " t=" + fmt(t, 4) + "s"};
}

struct HeadlineRun {
  McResult result;
  double seconds = 0;
};

Outcome real_headline(const HeadlineRun& short_run, const HeadlineRun& long_run) {
  const double g6 = short_run.result.estimate.gamma;
  const double g7 = long_run.result.estimate.gamma;
  const bool ok = g6 >= 0.155 && g6 <= 0.185 && short_run.seconds < 600.0 && std::abs(g7 - 0.18) <= 0.015 &&
                  long_run.seconds < 3600.0 && !long_run.result.partial;
  return {ok, "1e6: gamma=" + fmt(g6) + " +- " + fmt(short_run.result.estimate.gamma_stderr.value_or(0), 2) +
                  " t=" + fmt(short_run.seconds, 4) + "s; 1e7: gamma=" + fmt(g7) + " +- " +
                  fmt(long_run.result.estimate.gamma_stderr.value_or(0), 2) + " t=" + fmt(long_run.seconds, 4) + "s"};
}

Outcome complex_headline() {
  const auto t0 = Clock::now();
  const auto r = estimate_volume_mc(mc_config(SignalDomain::Complex, 51, 30, 1'000'000, Sampler::ImportanceUniform));
  const double t = seconds_since(t0);
  const double g = r.estimate.gamma;
  return {std::abs(g - 0.29) <= 0.015,
          "gamma=" + fmt(g) + " +- " + fmt(r.estimate.gamma_stderr.value_or(0), 2) + " n_sim=1e6 t=" + fmt(t, 4) + "s"};
}

Outcome discard_robustness(const HeadlineRun& long_run) {
  const auto& r = long_run.result;
  const double g = r.estimate.gamma;
  const double g10 = discard_topk(r, 10);
  const double change = 1.0 - g10 / g;
  return {r.completed_sims >= 10'000'000 && std::abs(change) < 0.005,
          "n_sim=" + std::to_string(r.completed_sims) + " gamma=" + fmt(g) + " top-10 removed=" + fmt(g10) +
              " change=" + fmt(100 * change, 3) + "%"};
}

Outcome integrand_diagnostics() {
  Outcome o{true, ""};
  for (int n : {51, 101}) {
    const auto m = ExtremeValueModel::discrete(SignalDomain::Real, n);
    const double z = integrand_argmax(m);
    const double full = log_volume_lower_bound(m).gamma;
    const double truncated = truncated_gamma_curve(m, {1e-200}).front();
    const double diff = std::abs(truncated / full - 1.0);
    o.pass = o.pass && z >= 1.6 && z <= 1.8 && diff <= 1e-9;
    o.detail += "N=" + std::to_string(n) + " argmax=" + fmt(z, 5) + " |truncated/full-1|=" + fmt(diff, 2) + "; ";
  }
  return o;
}

Outcome invariant_suites() {
  const auto checks = verify_invariants({0, kDefaultSeed});
  std::string failed;
  for (const auto& c : checks)
    if (!c.passed) failed += c.name + " ";
  return {all_passed(checks), std::to_string(checks.size()) + " checks" + (failed.empty() ? "" : ", failed: " + failed)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& run) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d  %-40s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  };

  report(1, "discrete anchors, zero variance", discrete_anchors);
  report(2, "small-N cube volume", cube_volume);
  report(3, "analytic asymptotes", analytic_asymptotes);
  report(4, "truncated-moment verification", truncated_moments);
  report(5, "maxima-law verification", maxima_law);

  HeadlineRun short_run;
  HeadlineRun long_run;
  auto headline = [&](std::uint64_t n_sim, HeadlineRun& out) {
    const auto t0 = Clock::now();
    out.result = estimate_volume_mc(mc_config(SignalDomain::Real, 101, 30, n_sim, Sampler::ImportanceUniform));
    out.seconds = seconds_since(t0);
  };
  report(6, "continuous real headline", [&] {
    headline(1'000'000, short_run);
    headline(10'000'000, long_run);
    return real_headline(short_run, long_run);
  });
  report(7, "continuous complex headline", complex_headline);
  report(8, "discard-top-k robustness", [&] {
    if (long_run.result.completed_sims == 0) headline(10'000'000, long_run);
    return discard_robustness(long_run);
  });
  report(9, "integrand diagnostics", integrand_diagnostics);
  report(10, "invariant suites", invariant_suites);

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
