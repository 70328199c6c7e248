#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "pplcap/extreme_stats.hpp"

using namespace pplcap;

namespace {

double rel(double a, double b) { return std::abs(a / b - 1.0); }

std::vector<ExtremeValueModel> all_laws(int n) {
  return {ExtremeValueModel::discrete(SignalDomain::Real, n), ExtremeValueModel::continuous(SignalDomain::Real, n, 2.5),
          ExtremeValueModel::discrete(SignalDomain::Complex, n),
          ExtremeValueModel::continuous(SignalDomain::Complex, n, 2.5)};
}

}  // namespace

TEST_CASE("maxima law reference values") {
  const auto dr1 = ExtremeValueModel::discrete(SignalDomain::Real, 1);
  CHECK(rel(max_pdf(dr1, 1.0), 0.48394144903828670) < 1e-14);
  const auto dr2 = ExtremeValueModel::discrete(SignalDomain::Real, 2);
  CHECK(rel(max_cdf(dr2, 1.0), 0.46606494267439227) < 1e-14);
  const auto cr = ExtremeValueModel::continuous(SignalDomain::Real, 101, 2.3);
  CHECK(rel(max_cdf(cr, 3.0), 0.53365230946400987) < 1e-12);
  CHECK(rel(max_pdf(cr, 3.0), 1.1017843217229411) < 1e-12);
  const auto dc = ExtremeValueModel::discrete(SignalDomain::Complex, 51);
  CHECK(rel(max_cdf(dc, 4.0), 0.38955205062973064) < 1e-13);
  CHECK(rel(max_pdf(dc, 4.0), 0.37066866244134792) < 1e-13);
  const auto cc = ExtremeValueModel::continuous(SignalDomain::Complex, 101, 2.8);
  CHECK(rel(max_quantile(cc, 0.5), 6.0124781120375344) < 1e-12);
}

TEST_CASE("maxima pdf integrates to one") {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (int n : {1, 2, 10, 101, 1001}) {
    for (const auto& m : all_laws(n)) {
      const double top = max_quantile(m, 1.0 - 1e-15) * 1.5;
      const double mass = GK::integrate([&](double v) { return v > 0.0 ? max_pdf(m, v) : 0.0; }, 1e-300, top, 20, 1e-12);
      INFO(to_string(m.law), " N=", n);
      CHECK(std::abs(mass - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("maxima cdf derivative matches the pdf") {
  for (int n : {2, 101, 1001}) {
    for (const auto& m : all_laws(n)) {
      for (double p : {0.05, 0.3, 0.5, 0.8, 0.99}) {
        const double v = max_quantile(m, p);
        const double h = 1e-5 * v;
        const double diff = (max_cdf(m, v + h) - max_cdf(m, v - h)) / (2 * h);
        CHECK(rel(diff, max_pdf(m, v)) < 1e-6);
      }
    }
  }
}

TEST_CASE("maxima cdf is monotone in v and decreasing in N") {
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    const double vmax = domain == SignalDomain::Real ? 6.0 : 20.0;
    for (int i = 1; i <= 1000; ++i) {
      const double v = vmax * i / 1000.0;
      const double a = max_cdf(ExtremeValueModel::discrete(domain, 10), v);
      const double b = max_cdf(ExtremeValueModel::discrete(domain, 100), v);
      const double c = max_cdf(ExtremeValueModel::continuous(domain, 100, 2.0), v);
      CHECK(b <= a);
      CHECK(c <= b);
      if (i > 1) CHECK(a >= max_cdf(ExtremeValueModel::discrete(domain, 10), vmax * (i - 1) / 1000.0));
    }
  }
}

TEST_CASE("max_quantile inverts the cdf") {
  for (const auto& m : all_laws(1001)) {
    for (double p : {1e-14, 1e-6, 0.1, 0.5, 0.9, 1 - 1e-6, 1 - 1e-14}) {
      const double v = max_quantile(m, p);
      CHECK(std::abs(log_max_cdf(m, v) - std::log(p)) < 1e-9 * std::max(1.0, std::abs(std::log(p))) + 1e-12);
    }
  }
  CHECK_THROWS_AS(max_quantile(ExtremeValueModel::discrete(SignalDomain::Real, 3), 0.0), std::domain_error);
  CHECK_THROWS_AS(max_quantile(ExtremeValueModel::discrete(SignalDomain::Real, 3), 1.0), std::domain_error);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ExtremeValueModel::discrete(SignalDomain::Real, 0), std::domain_error);
  CHECK_THROWS_AS(ExtremeValueModel::continuous(SignalDomain::Real, 10, 0.5), std::domain_error);
  CHECK_THROWS_AS(ExtremeValueModel::continuous(SignalDomain::Complex, 10, 4.5), std::domain_error);
  ExtremeValueModel bad{MaxLaw::DiscreteReal, 10, 2.0};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  CHECK_THROWS_AS(max_pdf(ExtremeValueModel::discrete(SignalDomain::Real, 3), 0.0), std::domain_error);
  CHECK(ExtremeValueModel::continuous(SignalDomain::Complex, 10, 2.0).effective_count() == 20.0);
}

TEST_CASE("default alpha follows the nearest tabulated N") {
  CHECK(default_alpha(101) == 2.3);
  CHECK(default_alpha(1001) == 2.8);
  CHECK(default_alpha(10001) == 2.9);
  CHECK(default_alpha(100001) == 2.9);
  CHECK(default_alpha(2) == 2.3);
  CHECK(default_alpha(300) == 2.3);
  CHECK(default_alpha(400) == 2.8);
  CHECK(default_alpha(1'000'000) == 2.9);
}

TEST_CASE("simulated discrete maxima follow the discrete law") {
  const std::uint64_t trials = 20000;
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    const auto h = simulate_max_distribution(101, 1, domain, trials, 5, 2);
    CHECK(std::is_sorted(h.maxima.begin(), h.maxima.end()));
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}) == trials);
    double mass = 0.0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) mass += h.density(b) * (h.bin_edges[b + 1] - h.bin_edges[b]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sup_cdf_distance(h.maxima, ExtremeValueModel::discrete(domain, 101)) < 3.0 / std::sqrt(double(trials)));
  }
}

TEST_CASE("waveform maxima dominate sample maxima") {
  for (auto domain : {SignalDomain::Real, SignalDomain::Complex}) {
    const auto d = simulate_max_distribution(31, 1, domain, 2000, 11, 1);
    const auto c = simulate_max_distribution(31, 8, domain, 2000, 11, 3);
    for (std::size_t i = 0; i < d.maxima.size(); ++i) CHECK(c.maxima[i] >= d.maxima[i] - 1e-12);
  }
}

TEST_CASE("simulation is independent of the worker count") {
  const auto a = simulate_max_distribution(21, 4, SignalDomain::Complex, 9000, 3, 1);
  const auto b = simulate_max_distribution(21, 4, SignalDomain::Complex, 9000, 3, 4);
  CHECK(a.maxima == b.maxima);
  CHECK(a.counts == b.counts);
}

TEST_CASE("histogram csv") {
  const auto h = simulate_max_distribution(11, 1, SignalDomain::Real, 1000, 1, 1);
  std::ostringstream out;
  h.write_csv(out);
  const auto text = out.str();
  CHECK(text.rfind("bin_left,bin_right,count,density\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(h.counts.size()) + 1);
}

TEST_CASE("simulation argument checks") {
  CHECK_THROWS_AS(simulate_max_distribution(1, 1, SignalDomain::Real, 1000, 1), std::domain_error);
  CHECK_THROWS_AS(simulate_max_distribution(10, 1, SignalDomain::Real, 999, 1), std::domain_error);
  CHECK_THROWS_AS(simulate_max_distribution(10, 0, SignalDomain::Real, 1000, 1), std::domain_error);
  CHECK_THROWS_AS(simulate_max_distribution(10, 1, SignalDomain::Real, std::uint64_t{1} << 40, 1), std::length_error);
}

TEST_CASE("alpha calibration on band-limited maxima") {
  const auto fit = calibrate_alpha(101, 30, SignalDomain::Real, 20000, 9, 0);
  CHECK(fit.alpha > 2.0);
  CHECK(fit.alpha < 2.5);
  CHECK(fit.sup_distance < 0.03);

  // sample maxima are best described without any inflation
  const auto flat = calibrate_alpha(101, 1, SignalDomain::Real, 20000, 9, 0);
  CHECK(flat.alpha < 1.1);
  CHECK(flat.sup_distance < 0.02);
}

TEST_CASE("conditional second moments follow the truncated-moment predictions") {
  const auto real = conditional_moment_check(SignalDomain::Real, 100, 200000, 21, 1.5, 4.0, 0.1, 1000, 0);
  REQUIRE(!real.empty());
  std::uint64_t total = 0;
  for (const auto& b : real) {
    CHECK(b.n_tuples >= 1000);
    CHECK(std::abs(b.relative_error()) < 0.05);
    total += b.n_tuples;
  }
  CHECK(total > 190000);
  const auto cplx = conditional_moment_check(SignalDomain::Complex, 100, 200000, 22, 2.25, 16.0, 0.25, 1000, 0);
  REQUIRE(!cplx.empty());
  for (const auto& b : cplx) CHECK(std::abs(b.relative_error()) < 0.05);
  CHECK_THROWS_AS(conditional_moment_check(SignalDomain::Real, 1, 1000, 1, 1.0, 2.0, 0.1, 10), std::domain_error);
  CHECK_THROWS_AS(conditional_moment_check(SignalDomain::Real, 10, 1000, 1, 2.0, 1.0, 0.1, 10), std::domain_error);
}
