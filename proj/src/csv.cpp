#include "popabm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "popabm/errors.hpp"

namespace popabm::csv {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Table Table::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse(in, path.string());
}

Table Table::parse(std::istream& in, std::string source) {
  Table t;
  t.source_ = std::move(source);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split(body);
    if (!have_header) {
      t.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size()) {
      throw InputError(t.source_ + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(t.header_.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    t.rows_.push_back(Row{lineno, std::move(fields)});
  }
  if (!have_header) throw InputError(t.source_ + ": missing header row");
  return t;
}

bool Table::has_column(std::string_view name) const {
  for (const auto& h : header_)
    if (h == name) return true;
  return false;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  throw InputError(source_ + ": missing column '" + std::string(name) + "'");
}

std::string Table::where(const Row& row) const { return source_ + ":" + std::to_string(row.line); }

double Table::number(const Row& row, std::size_t col) const {
  const std::string& f = row.fields.at(col);
  double v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
    throw InputError(where(row) + ": '" + f + "' is not a number (column " + header_.at(col) + ")");
  }
  return v;
}

std::int64_t Table::integer(const Row& row, std::size_t col) const {
  const std::string& f = row.fields.at(col);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
    throw InputError(where(row) + ": '" + f + "' is not an integer (column " + header_.at(col) + ")");
  }
  return v;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace popabm::csv
