#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace popabm::csv {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Comma-separated file with a mandatory header row. Blank lines and lines
// starting with '#' are skipped; fields are whitespace-trimmed. No quoting.
class Table {
 public:
  static Table read(const std::filesystem::path& path);
  static Table parse(std::istream& in, std::string source);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<Row>& rows() const { return rows_; }

  bool has_column(std::string_view name) const;
  // Throws InputError naming the file when the column is missing.
  std::size_t column(std::string_view name) const;

  // "file:line: message" for diagnostics.
  std::string where(const Row& row) const;

  double number(const Row& row, std::size_t col) const;
  std::int64_t integer(const Row& row, std::size_t col) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

// Shortest representation that round-trips.
std::string format_number(double value);

std::vector<std::string> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

}  // namespace popabm::csv
