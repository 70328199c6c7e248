#include "pplcap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace pplcap {

Json to_json(const McConfig& c) {
  Json j;
  j["domain"] = std::string(to_string(c.domain));
  j["n_symbols"] = c.n_symbols;
  j["oversample"] = c.oversample;
  j["n_sim"] = c.n_sim;
  j["sampler"] = std::string(to_string(c.sampler));
  j["seed"] = c.seed;
  j["top_k_tracked"] = c.top_k_tracked;
  j["checkpoint_schedule"] = c.effective_schedule();
  j["refine_peak"] = c.refine_peak;
  return j;
}

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const McResult& r, bool include_timing) {
  Json j;
  j["config"] = to_json(r.config);
  j["gamma"] = r.estimate.gamma;
  j["gamma_stderr"] = r.estimate.gamma_stderr.value_or(0.0);
  j["log_volume_per_dim"] = r.estimate.log_volume.log() / r.estimate.body_dimension;
  Json trace = Json::array();
  for (auto [n, g] : r.convergence_trace) trace.push_back({{"n_sim", n}, {"gamma", g}});
  j["convergence_trace"] = trace;
  Json discard = Json::array();
  for (auto [k, g] : r.discard_curve) discard.push_back({{"k_discarded", k}, {"gamma", g}});
  j["discard_curve"] = discard;
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  j["completed_sims"] = r.completed_sims;
  j["partial"] = r.partial;
  j["relative_variance"] = r.relative_variance;
  j["contribution_spread"] = r.contribution_spread;
  j["predicted_budget"] = finite_or_null(r.predicted_budget);
  j["likely_underestimate"] = r.likely_underestimate;
  return j;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_double(value)); }
CsvWriter& CsvWriter::cell(long long value) { return cell(std::to_string(value)); }
CsvWriter& CsvWriter::cell(unsigned long long value) { return cell(std::to_string(value)); }

CsvWriter& CsvWriter::cell(const std::string& value) {
  if (!row_.empty()) row_ += ',';
  row_ += value;
  return *this;
}

void CsvWriter::end_row() {
  buffer_ += row_;
  buffer_ += '\n';
  row_.clear();
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path_.string());
  out << buffer_;
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

void write_convergence_csv(const std::filesystem::path& path, const McResult& result) {
  CsvWriter csv(path, {"n_sim", "gamma"});
  for (auto [n, g] : result.convergence_trace) {
    csv.cell(static_cast<unsigned long long>(n)).cell(g);
    csv.end_row();
  }
  csv.close();
}

void write_discard_csv(const std::filesystem::path& path, const McResult& result) {
  CsvWriter csv(path, {"k_discarded", "gamma"});
  for (auto [k, g] : result.discard_curve) {
    csv.cell(static_cast<unsigned long long>(k)).cell(g);
    csv.end_row();
  }
  csv.close();
}

void write_json(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << value.dump(2) << '\n';
}

}  // namespace pplcap
