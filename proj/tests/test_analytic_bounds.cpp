#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pplcap/analytic_bounds.hpp"

using namespace pplcap;

namespace {

double rel(double a, double b) { return std::abs(a / b - 1.0); }

std::vector<ExtremeValueModel> laws(int n) {
  return {ExtremeValueModel::discrete(SignalDomain::Real, n),
          ExtremeValueModel::continuous(SignalDomain::Real, n, default_alpha(n)),
          ExtremeValueModel::discrete(SignalDomain::Complex, n),
          ExtremeValueModel::continuous(SignalDomain::Complex, n, default_alpha(n))};
}

// log of the integral by a dense composite Simpson rule on log-integrand values
double brute_log_integral(const ExtremeValueModel& m) {
  const double hi = max_quantile(m, 1.0 - 1e-15);
  const int steps = 400000;
  const double h = hi / steps;
  std::vector<double> li(steps + 1);
  for (int i = 1; i <= steps; ++i) li[i] = log_integrand(m, i * h);
  li[0] = -INFINITY;
  const double top = *std::max_element(li.begin() + 1, li.end());
  double s = 0.0;
  for (int i = 1; i <= steps; ++i) s += (i == steps ? 1.0 : (i % 2 ? 4.0 : 2.0)) * std::exp(li[i] - top);
  return top + std::log(s * h / 3.0);
}

}  // namespace

TEST_CASE("radial length reference values") {
  CHECK(rel(radial_length(ExtremeValueModel::discrete(SignalDomain::Real, 100), 1.7), 4.8197750109935649) < 1e-12);
  CHECK(rel(radial_length(ExtremeValueModel::discrete(SignalDomain::Complex, 100), 4.0), 4.8890613949904913) < 1e-12);
  CHECK(radial_length(ExtremeValueModel::discrete(SignalDomain::Real, 1), 2.0) == 1.0);
  CHECK_THROWS_AS(radial_length(ExtremeValueModel::discrete(SignalDomain::Real, 3), 0.0), std::domain_error);
}

TEST_CASE("volume integral agrees with dense brute-force integration") {
  for (int n : {5, 51}) {
    for (const auto& m : laws(n)) {
      const auto e = log_volume_lower_bound(m);
      const int d = body_dimension(m.domain(), n);
      const double brute = log_unit_ball_volume(d).log() + brute_log_integral(m);
      INFO(to_string(m.law), " N=", n);
      CHECK(std::abs(e.log_volume.log() - brute) < 1e-7 * std::max(1.0, std::abs(brute)));
    }
  }
}

TEST_CASE("analytic gamma never exceeds the sample-only bound") {
  for (int n : {2, 5, 10, 51, 101, 1001}) {
    for (const auto& m : laws(n)) {
      const auto e = log_volume_lower_bound(m);
      CHECK(e.gamma > 0.0);
      CHECK(e.gamma <= sampled_only_upper_bound(m.domain()));
      CHECK(e.method == EstimateMethod::Analytic);
      CHECK(e.body_dimension == body_dimension(m.domain(), n));
    }
  }
}

TEST_CASE("continuous gamma is below discrete gamma") {
  for (int n : {2, 5, 10, 51, 101, 1001, 10000}) {
    for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
      const double d = log_volume_lower_bound(ExtremeValueModel::discrete(domain, n)).gamma;
      for (double alpha : {1.5, 2.3, 2.9}) {
        const double c = log_volume_lower_bound(ExtremeValueModel::continuous(domain, n, alpha)).gamma;
        CHECK(c <= d);
      }
    }
  }
}

TEST_CASE("small-N discrete bound approaches the exact value from below") {
  const double exact = sampled_only_upper_bound(SignalDomain::Real);
  const double g2 = log_volume_lower_bound(ExtremeValueModel::discrete(SignalDomain::Real, 2)).gamma;
  CHECK(g2 <= exact);
  CHECK(g2 > 0.99 * exact);
  double prev = g2;
  for (int n : {5, 10, 51, 101, 1001}) {
    const double g = log_volume_lower_bound(ExtremeValueModel::discrete(SignalDomain::Real, n)).gamma;
    CHECK(g < prev);
    prev = g;
  }
  const double c5 = log_volume_lower_bound(ExtremeValueModel::discrete(SignalDomain::Complex, 5)).gamma;
  CHECK(c5 < sampled_only_upper_bound(SignalDomain::Complex));
}

TEST_CASE("large-N asymptotes") {
  const double real = log_volume_lower_bound(ExtremeValueModel::continuous(SignalDomain::Real, 10000, 2.9)).gamma;
  CHECK(std::abs(real - 0.15) <= 0.01);
  const double cplx = log_volume_lower_bound(ExtremeValueModel::continuous(SignalDomain::Complex, 10000, 2.9)).gamma;
  CHECK(std::abs(cplx - 0.245) <= 0.01);
  const double far = log_volume_lower_bound(ExtremeValueModel::continuous(SignalDomain::Real, 100000, 2.9)).gamma;
  CHECK(std::abs(far - real) < 1e-3);
}

TEST_CASE("gamma is invariant under the peak power") {
  for (const auto& m : laws(101)) {
    const auto e = log_volume_lower_bound(m);
    const double lv4 = e.log_volume.log() + 0.5 * e.body_dimension * std::log(4.0);
    CHECK(rel(gamma_from_log_volume(lv4, 101, m.domain(), 4.0), e.gamma) < 1e-12);
  }
}

TEST_CASE("tighter quadrature leaves the log-volume unchanged") {
  for (int n : {11, 101, 1001}) {
    for (const auto& m : laws(n)) {
      const double a = log_volume_lower_bound(m).log_volume.log();
      const double b = log_volume_lower_bound(m, 1e-11).log_volume.log();
      CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
    }
  }
}

TEST_CASE("integrand argmax") {
  CHECK(std::abs(integrand_argmax(ExtremeValueModel::discrete(SignalDomain::Real, 5)) - 1.28572) < 1e-4);
  for (int n : {51, 101}) {
    const double z = integrand_argmax(ExtremeValueModel::discrete(SignalDomain::Real, n));
    CHECK(z >= 1.6);
    CHECK(z <= 1.8);
  }
}

TEST_CASE("integrand profile") {
  const auto m = ExtremeValueModel::discrete(SignalDomain::Real, 101);
  std::vector<double> grid;
  for (int i = 1; i <= 400; ++i) grid.push_back(0.01 * i);
  const auto p = integrand_profile(m, grid);
  CHECK(*std::max_element(p.begin(), p.end()) == 1.0);
  const auto at = std::max_element(p.begin(), p.end()) - p.begin();
  CHECK(std::abs(grid[at] - integrand_argmax(m)) <= 0.01);
  CHECK_THROWS_AS(integrand_profile(m, {}), std::domain_error);
  CHECK_THROWS_AS(integrand_profile(m, {1.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(integrand_profile(m, {0.0, 0.5}), std::domain_error);
}

TEST_CASE("truncated gamma curve") {
  for (const auto& m : laws(101)) {
    const double full = log_volume_lower_bound(m).gamma;
    std::vector<double> qs{1e-200, 1e-100, 1e-50};
    for (int k = 40; k >= 1; --k) qs.push_back(std::pow(10.0, -0.5 * k));
    const auto curve = truncated_gamma_curve(m, qs);
    CHECK(std::abs(curve.front() - full) <= 1e-9 * full);
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] <= curve[i - 1] * (1 + 1e-12));
    CHECK(curve.back() < full);
  }
  CHECK_THROWS_AS(truncated_gamma_curve(ExtremeValueModel::discrete(SignalDomain::Real, 11), {0.1, 0.01}),
                  std::domain_error);
  CHECK_THROWS_AS(truncated_gamma_curve(ExtremeValueModel::discrete(SignalDomain::Real, 11), {0.0}), std::domain_error);
}

TEST_CASE("predicted sample budget grows with N") {
  const double b51 = predicted_sample_budget(ExtremeValueModel::continuous(SignalDomain::Real, 51, 2.3));
  const double b101 = predicted_sample_budget(ExtremeValueModel::continuous(SignalDomain::Real, 101, 2.3));
  const double b1001 = predicted_sample_budget(ExtremeValueModel::continuous(SignalDomain::Real, 1001, 2.8));
  CHECK(b51 >= 10.0);
  CHECK(b101 >= b51);
  CHECK(b1001 > b101);
  const double c51 = predicted_sample_budget(ExtremeValueModel::continuous(SignalDomain::Complex, 51, 2.3));
  CHECK(c51 >= b51);
}

TEST_CASE("capacity curves") {
  std::vector<double> grid(50);
  for (int i = 0; i < 50; ++i) grid[i] = std::pow(10.0, -2.0 + 6.0 * i / 49.0);
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    ChannelModel ch;
    ch.domain = domain;
    const double gamma = 0.18;
    const auto c = capacity_lower_bound(ch, gamma, grid);
    const double scale = domain == SignalDomain::Real ? 0.5 : 1.0;
    for (int i = 0; i < 50; ++i) {
      CHECK(c.ppl_lower_bound[i] <= c.apl_capacity[i]);
      CHECK(c.apl_capacity[i] == doctest::Approx(scale * std::log2(1 + grid[i])).epsilon(1e-15));
      if (i > 0) {
        CHECK(c.apl_capacity[i] > c.apl_capacity[i - 1]);
        CHECK(c.ppl_lower_bound[i] > c.ppl_lower_bound[i - 1]);
      }
    }
    CHECK(std::abs(c.apl_capacity.back() - c.ppl_lower_bound.back() - scale * std::log2(1 / gamma)) < 1e-3);
    CHECK(c.gamma_used == gamma);
  }
  ChannelModel ch;
  CHECK_THROWS_AS(capacity_lower_bound(ch, 0.0, {1.0}), std::domain_error);
  CHECK_THROWS_AS(capacity_lower_bound(ch, 1.5, {1.0}), std::domain_error);
  CHECK_THROWS_AS(capacity_lower_bound(ch, 0.2, {-1.0}), std::domain_error);
  ch.bandwidth = 0.0;
  CHECK_THROWS_AS(capacity_lower_bound(ch, 0.2, {1.0}), std::domain_error);
}

TEST_CASE("channel model") {
  ChannelModel ch{SignalDomain::Real, 2.0, 4.0, 0.25};
  CHECK(ch.noise_power() == 1.0);
  CHECK(ch.snr() == 2.0);
  CHECK(ch.nyquist_interval() == 0.125);
  ch.domain = SignalDomain::Complex;
  CHECK(ch.nyquist_interval() == 0.25);
}

TEST_CASE("sample-only bounds") {
  CHECK(rel(sampled_only_upper_bound(SignalDomain::Real), 0.23419932609727664) < 1e-15);
  CHECK(rel(sampled_only_upper_bound(SignalDomain::Complex), 0.36787944117144232) < 1e-15);
  CHECK(rel(std::numbers::pi / (32 * std::numbers::e), 0.036116479680966304) < 1e-15);
  CHECK(rel(std::numbers::pi * std::numbers::pi / (128 * std::numbers::e), 0.028365816809812195) < 1e-15);
}

TEST_CASE("volume bound argument checks") {
  CHECK_THROWS_AS(log_volume_lower_bound(ExtremeValueModel::discrete(SignalDomain::Real, 1)), std::domain_error);
}
