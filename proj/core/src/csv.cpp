#include "critheat/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace critheat {

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

CsvWriter::CsvWriter(std::ostream& os, std::initializer_list<std::string_view> columns)
    : os_(os), columns_(columns.size()) {
  bool first = true;
  for (auto name : columns) {
    if (!first) os_ << ',';
    os_ << name;
    first = false;
  }
  os_ << '\n';
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& columns)
    : os_(os), columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os_ << ',';
    os_ << columns[i];
  }
  os_ << '\n';
}

void CsvWriter::separator() {
  if (filled_ == columns_) throw std::logic_error("CsvWriter: too many cells in row");
  if (filled_ > 0) os_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  os_ << format_real(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  os_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  os_ << text;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CsvWriter: incomplete row");
  os_ << '\n';
  filled_ = 0;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  return out;
}

}  // namespace critheat
