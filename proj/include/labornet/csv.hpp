#pragma once

// Small CSV reader/writer. Lines starting with '#' are comments; those of the
// form "# key=value" are collected as metadata. Fields may be double-quoted.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace labornet {

struct CsvRow {
  std::size_t line = 0;  ///< 1-based line number in the source
  std::vector<std::string> fields;
};

struct CsvTable {
  std::string source;  ///< file name used in error messages
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws Parse naming the file when the column is absent.
  std::size_t column(std::string_view name) const;
  std::optional<std::string> meta(std::string_view key) const;

  /// "file:line" for error messages.
  std::string where(const CsvRow& row) const;
};

/// Parses CSV text. Every data row must have as many fields as the header.
CsvTable parse_csv(std::string_view text, std::string source);
CsvTable read_csv_file(const std::string& path);

/// Whole file as bytes. Throws Io.
std::string read_text_file(const std::string& path);

double parse_double(std::string_view field, const std::string& where);
std::int64_t parse_int(std::string_view field, const std::string& where);

/// Text that reads back to the same double (%.17g).
std::string format_double(double x);

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(std::string_view s);

/// Ordered "# key=value" header lines.
class Metadata {
 public:
  void add(std::string key, std::string value);
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace labornet
