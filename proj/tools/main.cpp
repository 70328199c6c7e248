#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pplcap/analytic_bounds.hpp"
#include "pplcap/extreme_stats.hpp"
#include "pplcap/io.hpp"
#include "pplcap/rng.hpp"
#include "pplcap/signal_synthesis.hpp"
#include "pplcap/verification.hpp"
#include "pplcap/volume_mc.hpp"

namespace fs = std::filesystem;
using namespace pplcap;

namespace {

constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PPLCAP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("PPLCAP_SEED is not an unsigned integer: ") + env);
    }
  }
  return kDefaultSeed;
}

Json defaults_echo() {
  Json alpha = Json::object();
  for (int n : {101, 1001, 10001, 100001}) alpha[std::to_string(n)] = default_alpha(n);
  return {{"oversample", 30}, {"alpha_table", alpha}, {"seed", default_seed()}};
}

class Manifest {
public:
  Manifest(std::string command, fs::path dir) : dir_(std::move(dir)), started_(utc_now()) {
    doc_["command"] = std::move(command);
  }
  Json& config() { return config_; }
  Json& extra() { return extra_; }
  fs::path artifact(const std::string& name) {
    fs::path p = dir_ / name;
    artifacts_.push_back(p.string());
    return p;
  }
  void write() {
    doc_["config_echo"] = config_;
    doc_["defaults"] = defaults_echo();
    doc_["artifact_paths"] = artifacts_;
    for (auto& [k, v] : extra_.items()) doc_[k] = v;
    doc_["tool_version"] = PPLCAP_VERSION;
    doc_["started"] = started_;
    doc_["finished"] = utc_now();
    write_json(dir_ / "manifest.json", doc_);
  }

private:
  fs::path dir_;
  std::string started_;
  Json doc_;
  Json config_ = Json::object();
  Json extra_ = Json::object();
  std::vector<std::string> artifacts_;
};

// ---- analytic ----

struct AnalyticArgs {
  std::string domain = "real";
  std::string law = "discrete";
  int n = 101;
  std::optional<double> alpha;
  bool profile = false;
  std::optional<int> figure;
  std::string out = ".";
};

ExtremeValueModel make_model(SignalDomain domain, bool continuous, int n, std::optional<double> alpha) {
  if (!continuous) {
    if (alpha && *alpha != 1.0) throw std::invalid_argument("--alpha applies to the continuous case only");
    return ExtremeValueModel::discrete(domain, n);
  }
  auto m = ExtremeValueModel::continuous(domain, n, alpha.value_or(default_alpha(n)));
  m.validate();
  return m;
}

std::string method_name(const ExtremeValueModel& m) {
  return m.is_continuous() ? "analytic-continuous" : "analytic-discrete";
}

void gamma_row(CsvWriter& csv, const ExtremeValueModel& m) {
  const auto e = log_volume_lower_bound(m);
  csv.cell(m.n_symbols).cell(m.alpha).cell(e.gamma).cell(sampled_only_upper_bound(m.domain())).cell(method_name(m));
  csv.end_row();
}

const std::vector<int>& figure_grid() {
  static const std::vector<int> grid = {2,    3,    5,    10,    11,    20,    50,    51,     100,    101,
                                        200,  500,  1000, 1001,  2000,  5000,  10000, 10001, 20000,  50000,
                                        100000};
  return grid;
}

void write_profile(const fs::path& path, const std::vector<ExtremeValueModel>& models) {
  CsvWriter csv(path, {"n_symbols", "alpha", "v", "integrand"});
  for (const auto& m : models) {
    const double lo = max_quantile(m, 1e-12);
    const double hi = max_quantile(m, 1.0 - 1e-12);
    std::vector<double> grid(400);
    for (int i = 0; i < 400; ++i) grid[i] = lo + (hi - lo) * i / 399.0;
    const auto prof = integrand_profile(m, grid);
    for (int i = 0; i < 400; ++i) {
      csv.cell(m.n_symbols).cell(m.alpha).cell(grid[i]).cell(prof[i]);
      csv.end_row();
    }
  }
  csv.close();
}

int run_analytic(const AnalyticArgs& a) {
  const auto domain = parse_domain(a.domain);
  if (a.law != "discrete" && a.law != "continuous") throw std::invalid_argument("--case must be discrete or continuous");
  const bool continuous = a.law == "continuous";
  fs::create_directories(a.out);
  Manifest man("analytic", a.out);
  auto& cfg = man.config();
  cfg["domain"] = a.domain;
  cfg["case"] = a.law;
  cfg["n"] = a.n;
  cfg["alpha"] = a.alpha ? Json(*a.alpha) : Json(nullptr);
  cfg["profile"] = a.profile;
  cfg["figure"] = a.figure ? Json(*a.figure) : Json(nullptr);
  cfg["out"] = a.out;

  if (a.figure) {
    const int f = *a.figure;
    const std::string name = "fig" + std::to_string(f) + ".csv";
    if (f == 5) {
      std::vector<ExtremeValueModel> ms;
      for (int n : {11, 51, 101, 1001}) ms.push_back(ExtremeValueModel::discrete(SignalDomain::Real, n));
      write_profile(man.artifact(name), ms);
    } else if (f == 6 || f == 8 || f == 16 || f == 17) {
      const auto d = f < 10 ? SignalDomain::Real : SignalDomain::Complex;
      const bool cont = f == 8 || f == 17;
      CsvWriter csv(man.artifact(name), {"n_symbols", "alpha", "gamma_lower", "gamma_upper", "method"});
      for (int n : figure_grid()) gamma_row(csv, make_model(d, cont, n, cont ? a.alpha : std::nullopt));
      csv.close();
    } else if (f == 9 || f == 18) {
      const auto d = f == 9 ? SignalDomain::Real : SignalDomain::Complex;
      std::vector<double> qs;
      for (int k = 32; k >= 2; --k) qs.push_back(std::pow(10.0, -0.5 * k));
      CsvWriter csv(man.artifact(name),
                    {"n_symbols", "alpha", "gamma_lower", "gamma_upper", "method", "p_discard"});
      for (int n : {11, 51, 101, 201, 501, 1001}) {
        const auto m = make_model(d, true, n, a.alpha);
        const auto curve = truncated_gamma_curve(m, qs);
        for (std::size_t i = 0; i < qs.size(); ++i) {
          csv.cell(n).cell(m.alpha).cell(curve[i]).cell(sampled_only_upper_bound(d)).cell(std::string("analytic-truncated"));
          csv.cell(qs[i]);
          csv.end_row();
        }
      }
      csv.close();
    } else {
      throw std::invalid_argument("--figure must be one of 5, 6, 8, 9, 16, 17, 18");
    }
    std::cout << "wrote " << (fs::path(a.out) / name).string() << "\n";
    man.write();
    return 0;
  }

  const auto m = make_model(domain, continuous, a.n, a.alpha);
  const auto e = log_volume_lower_bound(m);
  {
    CsvWriter csv(man.artifact("analytic.csv"), {"n_symbols", "alpha", "gamma_lower", "gamma_upper", "method"});
    csv.cell(m.n_symbols).cell(m.alpha).cell(e.gamma).cell(sampled_only_upper_bound(domain)).cell(method_name(m));
    csv.end_row();
  }
  std::cout << "n_symbols=" << m.n_symbols << " alpha=" << format_double(m.alpha)
            << " gamma=" << format_double(e.gamma) << "\n";
  if (a.profile) {
    write_profile(man.artifact("profile.csv"), {m});
    const double arg = integrand_argmax(m);
    man.extra()["integrand_argmax"] = arg;
    std::cout << "integrand_argmax=" << format_double(arg) << "\n";
  }
  man.extra()["gamma"] = e.gamma;
  man.write();
  return 0;
}

// ---- mc ----

struct McArgs {
  std::string domain = "real";
  int n = 101;
  int oversample = 30;
  long long nsim = 1'000'000;
  std::string sampler = "importance";
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  double budget_seconds = 0.0;
  bool refine_peak = false;
  std::string out = ".";
};

int run_mc(const McArgs& a) {
  if (a.nsim < 1000) throw std::invalid_argument("--nsim must be at least 1000");
  McConfig c;
  c.domain = parse_domain(a.domain);
  c.n_symbols = a.n;
  c.oversample = a.oversample;
  c.n_sim = static_cast<std::uint64_t>(a.nsim);
  c.sampler = parse_sampler(a.sampler);
  c.seed = a.seed.value_or(default_seed());
  c.refine_peak = a.refine_peak;
  c.top_k_tracked = std::min<std::uint64_t>(c.top_k_tracked, c.n_sim);
  c.validate();
  fs::create_directories(a.out);
  Manifest man("mc", a.out);
  man.config() = to_json(c);
  man.config()["workers"] = a.workers;
  man.config()["budget_seconds"] = a.budget_seconds;
  man.config()["out"] = a.out;

  const auto r = estimate_volume_mc(c, {a.workers, a.budget_seconds, true});
  write_json(man.artifact("mc_result.json"), to_json(r, false));
  write_convergence_csv(man.artifact("convergence.csv"), r);
  write_discard_csv(man.artifact("discard.csv"), r);
  man.extra()["partial"] = r.partial;
  man.extra()["completed_sims"] = r.completed_sims;
  man.extra()["wall_seconds"] = r.wall_seconds;
  if (c.oversample > 1 && c.n_symbols >= 2) {
    // peak underestimate of the grid, measured against twice the oversampling
    const auto s = oversample_sensitivity(c.n_symbols, c.domain, c.oversample, 1000, c.seed);
    man.extra()["oversample_check"] = Json{{"oversample", s.oversample},
                                           {"doubled", 2 * s.oversample},
                                           {"draws", s.n_draws},
                                           {"mean_peak_increase", s.mean_relative_increase},
                                           {"max_peak_increase", s.max_relative_increase}};
  }
  man.write();
  std::cout << "gamma=" << format_double(r.estimate.gamma)
            << " stderr=" << format_double(r.estimate.gamma_stderr.value_or(0.0))
            << " completed=" << r.completed_sims << (r.partial ? " (partial)" : "")
            << (r.likely_underestimate ? " likely-underestimate" : "") << "\n";
  return 0;
}

// ---- table1 ----

int run_table1(const std::string& budget, std::optional<std::uint64_t> seed, unsigned workers,
               const std::string& out) {
  std::uint64_t n_sim = 0;
  if (budget == "desk") n_sim = 1'000'000;
  else if (budget == "full") n_sim = 100'000'000;
  else throw std::invalid_argument("--budget must be desk or full");
  fs::create_directories(out);
  Manifest man("table1", out);
  const std::uint64_t base_seed = seed.value_or(default_seed());
  man.config() = {{"budget", budget}, {"n_sim", n_sim}, {"seed", base_seed}, {"workers", workers}, {"out", out}};

  CsvWriter csv(man.artifact("table1.csv"),
                {"bound", "source", "n_symbols", "alpha", "gamma", "annotation", "n_sim", "likely_underestimate"});
  auto reference = [&](const std::string& bound, const std::string& source, double g) {
    csv.cell(bound).cell(source).cell(std::string()).cell(std::string()).cell(g).cell(std::string("reference"));
    csv.cell(std::string()).cell(std::string());
    csv.end_row();
  };
  auto conjecture = [&](const std::string& bound, SignalDomain d) {
    const auto m = ExtremeValueModel::continuous(d, 10000, default_alpha(10000));
    csv.cell(bound).cell(std::string("analytic conjecture")).cell(10000).cell(m.alpha);
    csv.cell(log_volume_lower_bound(m).gamma).cell(std::string("computed")).cell(std::string()).cell(std::string());
    csv.end_row();
  };
  auto monte_carlo = [&](const std::string& bound, SignalDomain d, int n) {
    McConfig c;
    c.domain = d;
    c.n_symbols = n;
    c.n_sim = n_sim;
    c.seed = make_substream(base_seed, 0x7461626c, static_cast<std::uint64_t>(n) * 2 + (d == SignalDomain::Complex))();
    const auto r = estimate_volume_mc(c, {workers, 0.0, true});
    csv.cell(bound).cell(std::string("monte carlo CP-FDE")).cell(n).cell(std::string());
    csv.cell(r.estimate.gamma).cell(std::string("computed")).cell(static_cast<unsigned long long>(r.completed_sims));
    csv.cell(std::string(r.likely_underestimate ? "true" : "false"));
    csv.end_row();
    std::cerr << bound << " N=" << n << " gamma=" << format_double(r.estimate.gamma) << "\n";
  };
  reference("low pass lower", "prior [5]", std::numbers::pi / (32.0 * std::numbers::e));
  reference("low pass lower", "prior [6]", 0.04470);
  conjecture("low pass lower", SignalDomain::Real);
  monte_carlo("low pass lower", SignalDomain::Real, 101);
  reference("low pass upper", "sampled only", sampled_only_upper_bound(SignalDomain::Real));
  reference("band pass lower", "prior [5]", std::numbers::pi * std::numbers::pi / (128.0 * std::numbers::e));
  conjecture("band pass lower", SignalDomain::Complex);
  monte_carlo("band pass lower", SignalDomain::Complex, 101);
  monte_carlo("band pass lower", SignalDomain::Complex, 51);
  reference("band pass upper", "sampled only", sampled_only_upper_bound(SignalDomain::Complex));
  csv.close();
  man.write();
  std::cout << "wrote " << (fs::path(out) / "table1.csv").string() << "\n";
  return 0;
}

// ---- verify ----

int run_verify(const std::string& suite, std::optional<std::uint64_t> seed, unsigned workers, const std::string& out) {
  VerifyOptions opt{workers, seed.value_or(1)};
  std::vector<VerifyCheck> checks;
  if (suite == "anchors") checks = verify_anchors(opt);
  else if (suite == "stats") checks = verify_stats(opt);
  else if (suite == "invariants") checks = verify_invariants(opt);
  else throw std::invalid_argument("verify suite must be anchors, stats or invariants");
  fs::create_directories(out);
  Manifest man("verify", out);
  man.config() = {{"suite", suite}, {"seed", opt.seed}, {"workers", workers}, {"out", out}};
  write_verify_report(man.artifact("verify_" + suite + ".csv"), checks);
  const bool ok = all_passed(checks);
  man.extra()["passed"] = ok;
  man.write();
  for (const auto& c : checks)
    std::cout << (c.passed ? "pass  " : "FAIL  ") << c.name << "  measured=" << format_double(c.measured)
              << " threshold=" << format_double(c.threshold) << "\n";
  return ok ? 0 : kExitVerifyFail;
}

// ---- maxdist ----

struct MaxdistArgs {
  std::string domain = "real";
  int n = 1001;
  int oversample = 30;
  long long trials = 100'000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  bool calibrate = true;
  std::string out = ".";
};

int run_maxdist(const MaxdistArgs& a) {
  if (a.trials < 1000) throw std::invalid_argument("--trials must be at least 1000");
  const auto domain = parse_domain(a.domain);
  fs::create_directories(a.out);
  Manifest man("maxdist", a.out);
  const std::uint64_t seed = a.seed.value_or(default_seed());
  man.config() = {{"domain", a.domain}, {"n", a.n},       {"oversample", a.oversample}, {"trials", a.trials},
                  {"seed", seed},       {"workers", a.workers}, {"calibrate", a.calibrate}, {"out", a.out}};
  const auto h = simulate_max_distribution(a.n, a.oversample, domain, static_cast<std::uint64_t>(a.trials), seed,
                                           a.workers);
  {
    std::ofstream f(man.artifact("maxdist.csv"), std::ios::binary);
    h.write_csv(f);
  }
  int code = 0;
  if (a.calibrate) {
    try {
      const auto fit = calibrate_alpha(h);
      man.extra()["alpha"] = fit.alpha;
      man.extra()["sup_distance"] = fit.sup_distance;
      std::cout << "alpha=" << format_double(fit.alpha) << " sup_distance=" << format_double(fit.sup_distance) << "\n";
    } catch (const NumericError& e) {
      man.extra()["calibration_error"] = e.what();
      std::cerr << "error: " << e.what() << " (distance " << e.residual() << ")\n";
      code = kExitNumeric;
    }
  }
  man.write();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity bounds for peak-power-limited band-limited AWGN channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PPLCAP_VERSION);

  AnalyticArgs an;
  auto* analytic = app.add_subcommand("analytic", "Analytic volume lower bound and figure curves");
  analytic->add_option("--domain", an.domain, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  analytic->add_option("--case", an.law, "discrete or continuous")->check(CLI::IsMember({"discrete", "continuous"}));
  analytic->add_option("--n", an.n, "Nyquist samples per block")->check(CLI::Range(2, 10'000'000));
  analytic->add_option("--alpha", an.alpha, "oversampling-equivalence factor (continuous case)");
  analytic->add_flag("--profile", an.profile, "write the integrand profile and its argmax");
  analytic->add_option("--figure", an.figure, "emit a figure curve: 5, 6, 8, 9, 16, 17 or 18")
      ->check(CLI::IsMember({5, 6, 8, 9, 16, 17, 18}));
  analytic->add_option("--out", an.out, "output directory");

  McArgs mc;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo volume estimate");
  mc_cmd->add_option("--domain", mc.domain)->check(CLI::IsMember({"real", "complex"}));
  mc_cmd->add_option("--n", mc.n)->check(CLI::Range(1, 10'000'000));
  mc_cmd->add_option("--oversample", mc.oversample)->check(CLI::Range(1, 1024));
  mc_cmd->add_option("--nsim", mc.nsim, "number of directions (>= 1000)");
  mc_cmd->add_option("--sampler", mc.sampler)->check(CLI::IsMember({"importance", "gaussian"}));
  mc_cmd->add_option("--seed", mc.seed);
  mc_cmd->add_option("--workers", mc.workers, "worker threads (0: all cores)");
  mc_cmd->add_option("--budget-seconds", mc.budget_seconds, "wall-clock limit, 0 for none")->check(CLI::NonNegativeNumber);
  mc_cmd->add_flag("--refine-peak", mc.refine_peak);
  mc_cmd->add_option("--out", mc.out);

  std::string budget = "desk";
  std::optional<std::uint64_t> t_seed;
  unsigned t_workers = 0;
  std::string t_out = ".";
  auto* table = app.add_subcommand("table1", "Power-efficiency summary table");
  table->add_option("--budget", budget)->check(CLI::IsMember({"desk", "full"}));
  table->add_option("--seed", t_seed);
  table->add_option("--workers", t_workers);
  table->add_option("--out", t_out);

  std::string suite;
  std::optional<std::uint64_t> v_seed;
  unsigned v_workers = 0;
  std::string v_out = ".";
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "anchors, stats or invariants")
      ->required()
      ->check(CLI::IsMember({"anchors", "stats", "invariants"}));
  verify->add_option("--seed", v_seed);
  verify->add_option("--workers", v_workers);
  verify->add_option("--out", v_out);

  MaxdistArgs md;
  auto* maxdist = app.add_subcommand("maxdist", "Simulated maxima distribution and alpha calibration");
  maxdist->add_option("--domain", md.domain)->check(CLI::IsMember({"real", "complex"}));
  maxdist->add_option("--n", md.n)->check(CLI::Range(2, 10'000'000));
  maxdist->add_option("--oversample", md.oversample)->check(CLI::Range(1, 1024));
  maxdist->add_option("--trials", md.trials);
  maxdist->add_option("--seed", md.seed);
  maxdist->add_option("--workers", md.workers);
  maxdist->add_flag("!--no-calibrate", md.calibrate, "skip the alpha fit");
  maxdist->add_option("--out", md.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analytic) return run_analytic(an);
    if (*mc_cmd) return run_mc(mc);
    if (*table) return run_table1(budget, t_seed, t_workers, t_out);
    if (*verify) return run_verify(suite, v_seed, v_workers, v_out);
    if (*maxdist) return run_maxdist(md);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
