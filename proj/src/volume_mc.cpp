#include "pplcap/volume_mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>

#include "pplcap/analytic_bounds.hpp"
#include "pplcap/extreme_stats.hpp"
#include "pplcap/parallel.hpp"
#include "pplcap/rng.hpp"
#include "pplcap/signal_synthesis.hpp"

namespace pplcap {

std::string_view to_string(Sampler sampler) {
  return sampler == Sampler::GaussianDirection ? "gaussian" : "importance";
}

Sampler parse_sampler(std::string_view text) {
  if (text == "gaussian" || text == "gaussian-direction") return Sampler::GaussianDirection;
  if (text == "importance" || text == "importance-uniform") return Sampler::ImportanceUniform;
  throw std::invalid_argument("unknown sampler '" + std::string(text) + "'");
}

void McConfig::validate() const {
  if (n_symbols < 1) throw std::domain_error("McConfig: n_symbols must be >= 1");
  if (oversample < 1) throw std::domain_error("McConfig: oversample must be >= 1");
  if (oversample > 1 && n_symbols < 2) throw std::domain_error("McConfig: oversampling needs N >= 2");
  if (n_sim < 1000) throw std::domain_error("McConfig: n_sim must be >= 1000");
  if (top_k_tracked > n_sim) throw std::domain_error("McConfig: top_k_tracked exceeds n_sim");
  if (!checkpoint_schedule.empty()) {
    for (std::size_t i = 1; i < checkpoint_schedule.size(); ++i)
      if (checkpoint_schedule[i] <= checkpoint_schedule[i - 1])
        throw std::domain_error("McConfig: checkpoint schedule must be increasing");
    if (checkpoint_schedule.front() == 0) throw std::domain_error("McConfig: checkpoints must be positive");
    if (checkpoint_schedule.back() != n_sim)
      throw std::domain_error("McConfig: last checkpoint must equal n_sim");
  }
}

std::vector<std::uint64_t> McConfig::effective_schedule() const {
  if (!checkpoint_schedule.empty()) return checkpoint_schedule;
  std::vector<std::uint64_t> s;
  for (std::uint64_t p = 10; p < n_sim; p *= 10) s.push_back(p);
  s.push_back(n_sim);
  return s;
}

double log_contribution(Sampler sampler, SignalDomain domain, int n_symbols, double radial_distance,
                        double cube_dfo) {
  const double n = static_cast<double>(n_symbols);
  if (sampler == Sampler::GaussianDirection) {
    const int d = body_dimension(domain, n_symbols);
    return log_unit_ball_volume(d).log() + d * std::log(radial_distance);
  }
  const double ratio = std::log(radial_distance) - std::log(cube_dfo);
  if (domain == SignalDomain::Real) return n * (std::numbers::ln2 + ratio);
  return n * std::log(std::numbers::pi) + 2.0 * n * ratio;
}

namespace {

constexpr std::uint64_t kDirectionStream = 0x766f6c;

struct ChunkResult {
  bool done = false;
  StreamingLogMean acc;
  std::vector<double> top;  // unsorted
  std::vector<std::pair<std::uint64_t, StreamingLogMean>> snapshots;
};

double gamma_of(const StreamingLogMean& acc, const McConfig& c) {
  return gamma_from_log_volume(acc.log_mean(), c.n_symbols, c.domain);
}

StreamingLogMean tree_merge(std::vector<StreamingLogMean> level) {
  if (level.empty()) return {};
  while (level.size() > 1) {
    std::vector<StreamingLogMean> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      StreamingLogMean m = level[i];
      m.merge(level[i + 1]);
      next.push_back(m);
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

}  // namespace

McResult estimate_volume_mc(const McConfig& config, const RunOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto schedule = config.effective_schedule();
  const std::uint64_t n_chunks = (config.n_sim + kMcChunk - 1) / kMcChunk;
  const unsigned workers = options.workers == 0 ? default_workers() : options.workers;
  const int n = config.n_symbols;
  const auto domain = config.domain;
  const double log_ball = log_unit_ball_volume(body_dimension(domain, n)).log();

  std::vector<ChunkResult> chunks(n_chunks);
  std::vector<std::optional<BandlimitInterpolator>> interp(workers);

  parallel_chunks(n_chunks, workers, [&](unsigned worker, std::size_t chunk) {
    if (options.wall_budget_seconds > 0.0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() > options.wall_budget_seconds) return false;
    }
    if (config.oversample > 1 && !interp[worker]) interp[worker].emplace(domain, n, config.oversample);
    ChunkResult& out = chunks[chunk];
    const std::uint64_t begin = chunk * kMcChunk;
    const std::uint64_t end = std::min(config.n_sim, begin + kMcChunk);
    auto next_cp = std::lower_bound(schedule.begin(), schedule.end(), begin + 1);
    std::priority_queue<double, std::vector<double>, std::greater<>> heap;

    for (std::uint64_t i = begin; i < end; ++i) {
      auto rng = make_substream(config.seed, kDirectionStream, i);
      auto x = config.sampler == Sampler::GaussianDirection ? draw_gaussian_direction(n, domain, rng)
                                                            : draw_importance_uniform(n, domain, rng);
      const double sample_peak = x.max_abs();
      const double peak = config.oversample > 1 ? interp[worker]->peak(x, config.refine_peak) : sample_peak;
      const double norm = x.norm();
      const double r = norm / peak;
      double c = 0.0;
      if (config.sampler == Sampler::GaussianDirection) {
        c = log_ball + body_dimension(domain, n) * std::log(r);
      } else {
        c = log_contribution(config.sampler, domain, n, r, norm / sample_peak);
      }
      out.acc.add(c);
      if (heap.size() < config.top_k_tracked) {
        heap.push(c);
      } else if (config.top_k_tracked > 0 && c > heap.top()) {
        heap.pop();
        heap.push(c);
      }
      while (next_cp != schedule.end() && *next_cp == i + 1) {
        out.snapshots.emplace_back(*next_cp, out.acc);
        ++next_cp;
      }
    }
    out.top.reserve(heap.size());
    while (!heap.empty()) {
      out.top.push_back(heap.top());
      heap.pop();
    }
    out.done = true;
    return true;
  });

  McResult res;
  res.config = config;
  std::uint64_t done_chunks = 0;
  while (done_chunks < n_chunks && chunks[done_chunks].done) ++done_chunks;
  if (done_chunks == 0) throw std::runtime_error("estimate_volume_mc: wall-clock budget exhausted before any work");
  res.completed_sims = std::min(config.n_sim, done_chunks * kMcChunk);
  res.partial = done_chunks < n_chunks;

  std::vector<StreamingLogMean> accs;
  accs.reserve(done_chunks);
  for (std::uint64_t c = 0; c < done_chunks; ++c) accs.push_back(chunks[c].acc);
  res.accumulator = tree_merge(accs);

  const double log_volume = res.accumulator.log_mean();
  res.estimate = make_volume_estimate(log_volume, n, domain, EstimateMethod::MonteCarlo);
  res.relative_variance = res.accumulator.relative_variance();
  res.contribution_spread = res.accumulator.max_contribution() - res.accumulator.min_contribution();
  const double exponent = domain == SignalDomain::Real ? 2.0 / n : 1.0 / n;
  const double rel_se_volume = std::sqrt(res.relative_variance / static_cast<double>(res.completed_sims));
  res.estimate.gamma_stderr = res.estimate.gamma * exponent * rel_se_volume;

  // prefix snapshots in chunk order
  StreamingLogMean prefix;
  for (std::uint64_t c = 0; c < done_chunks; ++c) {
    for (const auto& [at, snap] : chunks[c].snapshots) {
      if (at == res.completed_sims) continue;
      StreamingLogMean s = prefix;
      s.merge(snap);
      res.convergence_trace.emplace_back(at, gamma_of(s, config));
    }
    prefix.merge(chunks[c].acc);
  }
  res.convergence_trace.emplace_back(res.completed_sims, res.estimate.gamma);

  for (std::uint64_t c = 0; c < done_chunks; ++c)
    res.top_contributions.insert(res.top_contributions.end(), chunks[c].top.begin(), chunks[c].top.end());
  std::sort(res.top_contributions.begin(), res.top_contributions.end(), std::greater<>());
  if (res.top_contributions.size() > config.top_k_tracked) res.top_contributions.resize(config.top_k_tracked);

  for (std::uint64_t k : {0, 1, 2, 5, 10, 20, 50, 100, 200, 500, 1000}) {
    if (k > res.top_contributions.size() || k + 1 >= res.completed_sims) break;
    res.discard_curve.emplace_back(k, discard_topk(res, k));
  }

  if (options.assess_budget && !(config.oversample == 1 && config.sampler == Sampler::ImportanceUniform) &&
      n >= 2) {
    const auto model = config.oversample == 1 ? ExtremeValueModel::discrete(domain, n)
                                              : ExtremeValueModel::continuous(domain, n, default_alpha(n));
    res.predicted_budget = predicted_sample_budget(model);
    res.likely_underestimate = static_cast<double>(res.completed_sims) < res.predicted_budget;
  }

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  res.wall_seconds = elapsed.count();
  return res;
}

double discard_topk(const McResult& result, std::uint64_t k) {
  if (k > result.config.top_k_tracked || k > result.top_contributions.size())
    throw std::domain_error("discard_topk: k exceeds the tracked contributions");
  if (k == 0) return result.estimate.gamma;
  const auto& acc = result.accumulator;
  if (k >= acc.count()) throw std::domain_error("discard_topk: cannot discard every contribution");
  const double shift = acc.shift();
  double removed = 0.0;
  for (std::uint64_t j = 0; j < k; ++j) removed += std::exp(result.top_contributions[j] - shift);
  const double remaining = acc.scaled_sum() - removed;
  if (!(remaining > 0.0)) return 0.0;
  const double log_mean = shift + std::log(remaining) - std::log(static_cast<double>(acc.count() - k));
  return gamma_from_log_volume(log_mean, result.config.n_symbols, result.config.domain);
}

std::vector<SweepPoint> gamma_vs_n_sweep(const McConfig& base, const std::vector<int>& n_values,
                                         const RunOptions& options) {
  std::vector<SweepPoint> out;
  for (int n : n_values) {
    McConfig c = base;
    c.n_symbols = n;
    c.checkpoint_schedule.clear();
    c.seed = make_substream(base.seed, 0x73776570, static_cast<std::uint64_t>(n))();
    const auto r = estimate_volume_mc(c, options);
    out.push_back({n, r.estimate.gamma, r.estimate.gamma_stderr.value_or(0.0), r.likely_underestimate});
  }
  return out;
}

}  // namespace pplcap
