#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wasb {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// Minimal comma-separated writer: header row first, then one row per record.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(bool value) { return cell(std::string_view(value ? "pass" : "fail")); }
  void end_row();

  std::size_t columns() const noexcept { return columns_.size(); }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
  std::size_t in_row_ = 0;
};

}  // namespace wasb
