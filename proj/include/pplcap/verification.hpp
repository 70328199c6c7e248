#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pplcap {

struct VerifyCheck {
  std::string suite;
  std::string name;
  double measured = 0;
  double threshold = 0;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  unsigned workers = 0;
  std::uint64_t seed = 1;
};

/// Zero-variance discrete anchors and the small-N cube volume.
std::vector<VerifyCheck> verify_anchors(const VerifyOptions& options = {});
/// Truncated-moment predictions and the discrete maxima law against simulation.
std::vector<VerifyCheck> verify_stats(const VerifyOptions& options = {});
/// Geometric, spectral, scaling and determinism properties.
std::vector<VerifyCheck> verify_invariants(const VerifyOptions& options = {});

bool all_passed(const std::vector<VerifyCheck>& checks);
/// CSV: suite,check,measured,threshold,passed,detail
void write_verify_report(const std::filesystem::path& path, const std::vector<VerifyCheck>& checks);

}  // namespace pplcap
