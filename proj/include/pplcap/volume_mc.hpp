#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "pplcap/common.hpp"

namespace pplcap {

enum class Sampler { GaussianDirection, ImportanceUniform };

std::string_view to_string(Sampler sampler);
Sampler parse_sampler(std::string_view text);

struct McConfig {
  SignalDomain domain = SignalDomain::Real;
  int n_symbols = 101;
  int oversample = 30;
  std::uint64_t n_sim = 1'000'000;
  Sampler sampler = Sampler::ImportanceUniform;
  std::uint64_t seed = 1;
  std::uint64_t top_k_tracked = 1000;
  /// n_sim values at which gamma is snapshotted; empty means powers of ten
  /// followed by n_sim.
  std::vector<std::uint64_t> checkpoint_schedule;
  /// Parabolic off-grid peak refinement (off by default).
  bool refine_peak = false;

  void validate() const;
  /// Schedule with the default filled in.
  std::vector<std::uint64_t> effective_schedule() const;
};

struct RunOptions {
  unsigned workers = 0;              // 0: hardware concurrency
  double wall_budget_seconds = 0.0;  // 0: unlimited
  bool assess_budget = true;         // compute the likely-underestimate flag
};

struct McResult {
  McConfig config;
  VolumeEstimate estimate;
  std::vector<std::pair<std::uint64_t, double>> convergence_trace;
  std::vector<double> top_contributions;  // descending log-contributions
  std::vector<std::pair<std::uint64_t, double>> discard_curve;
  StreamingLogMean accumulator;
  /// max - min of the per-vector log-contributions.
  double contribution_spread = 0.0;
  /// Sample variance of exp(contribution) over its squared mean.
  double relative_variance = 0.0;
  std::uint64_t completed_sims = 0;
  bool partial = false;
  double wall_seconds = 0.0;
  /// Sample count the truncated analytic curve asks for (inf when unknown).
  double predicted_budget = 0.0;
  bool likely_underestimate = false;
};

/// Log-contribution of a single direction:
///   Gaussian:           log V_d^u + d log r
///   importance, real:   N (log 2 + log r - log L_c)
///   importance, complex: N log pi + 2N (log r - log L_c)
double log_contribution(Sampler sampler, SignalDomain domain, int n_symbols, double radial_distance,
                        double cube_dfo);

/// Monte Carlo volume of the peak-limited body.
///
/// Directions are processed in fixed chunks of 2^16 vectors; vector i
/// always draws from substream (seed, i), and chunk accumulators are
/// combined by a fixed binary tree, so the result is bit-identical for any
/// worker count. When the wall-clock budget runs out, the longest completed
/// prefix of chunks is reported and the result is flagged partial.
McResult estimate_volume_mc(const McConfig& config, const RunOptions& options = {});

/// gamma with the k largest contributions removed.
double discard_topk(const McResult& result, std::uint64_t k);

struct SweepPoint {
  int n_symbols = 0;
  double gamma = 0.0;
  double gamma_stderr = 0.0;
  bool likely_underestimate = false;
};

/// One estimate per N with seeds derived from the base seed and N.
std::vector<SweepPoint> gamma_vs_n_sweep(const McConfig& base, const std::vector<int>& n_values,
                                         const RunOptions& options = {});

/// Chunk size of the deterministic reduction.
inline constexpr std::uint64_t kMcChunk = std::uint64_t{1} << 16;

}  // namespace pplcap
