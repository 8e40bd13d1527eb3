#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace equibench::cli {

/// Malformed CSV input; `line()` is 1-based.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;  // starting line of each row

  /// Column position by name, if present.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
/// breaks; CRLF and LF endings are both accepted. Every row must have as many
/// fields as the header.
CsvTable read_csv(std::istream& in);

/// Writes one record, quoting fields that need it, terminated by '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double value);

/// Locale-independent parse of the whole string; nullopt on any junk.
std::optional<double> parse_double(std::string_view text);

}  // namespace equibench::cli
