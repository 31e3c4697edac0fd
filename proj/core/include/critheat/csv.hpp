#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace critheat {

// Formats a double with 17 significant digits (round-trip exact).
std::string format_real(double value);

// Minimal CSV writer: header on construction, one row per call.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::initializer_list<std::string_view> columns);
  CsvWriter(std::ostream& os, const std::vector<std::string>& columns);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(std::string_view text);
  void end_row();

 private:
  void separator();

  std::ostream& os_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

// Opens a file for writing, creating parent directories; throws std::runtime_error on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace critheat
