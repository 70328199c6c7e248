#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pplcap/volume_mc.hpp"

namespace pplcap {

using Json = nlohmann::ordered_json;

Json to_json(const McConfig& config);
/// volume-mc result export; wall_seconds is omitted when include_timing is
/// false so that reruns compare byte for byte.
Json to_json(const McResult& result, bool include_timing = true);

/// CSV writer with a mandatory header, LF endings and 17 significant digits.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(const std::string& value);
  void end_row();
  void close();
  ~CsvWriter();

private:
  std::string buffer_;
  std::string row_;
  std::filesystem::path path_;
  bool closed_ = false;
};

std::string format_double(double value);

void write_convergence_csv(const std::filesystem::path& path, const McResult& result);
void write_discard_csv(const std::filesystem::path& path, const McResult& result);
void write_json(const std::filesystem::path& path, const Json& value);

}  // namespace pplcap
