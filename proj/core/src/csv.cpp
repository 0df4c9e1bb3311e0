#include "wasb/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace wasb {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns)
    : out_(out), columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns_[i];
  }
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (in_row_ >= columns_.size()) throw std::logic_error("too many CSV cells in row");
  if (in_row_) out_ << ',';
  const bool quote = text.find_first_of(",\"\n") != std::string_view::npos;
  if (quote) {
    out_ << '"';
    for (char c : text) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  } else {
    out_ << text;
  }
  ++in_row_;
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(std::string_view(format_double(value))); }

CsvWriter& CsvWriter::cell(long long value) { return cell(std::string_view(std::to_string(value))); }

void CsvWriter::end_row() {
  if (in_row_ != columns_.size()) throw std::logic_error("incomplete CSV row");
  out_ << '\n';
  in_row_ = 0;
}

}  // namespace wasb
