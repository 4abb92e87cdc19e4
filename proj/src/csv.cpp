#include "labornet/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "labornet/error.hpp"

namespace labornet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_fields(std::string_view line, const std::string& where) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool wasQuoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          cur += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && trim(cur).empty()) {
      quoted = true;
      wasQuoted = true;
      cur.clear();
    } else if (c == ',') {
      out.push_back(wasQuoted ? cur : std::string(trim(cur)));
      cur.clear();
      wasQuoted = false;
    } else if (!wasQuoted) {
      cur += c;
    } else if (c != ' ' && c != '\t' && c != '\r') {
      throw Error(ErrorKind::Parse, where + ": text after closing quote");
    }
  }
  if (quoted) throw Error(ErrorKind::Parse, where + ": unterminated quote");
  out.push_back(wasQuoted ? cur : std::string(trim(cur)));
  return out;
}

}  // namespace

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto k = find_column(name)) return *k;
  throw Error(ErrorKind::Parse, source + ": missing column '" + std::string(name) + "'");
}

std::optional<std::string> CsvTable::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string CsvTable::where(const CsvRow& row) const {
  return source + ":" + std::to_string(row.line);
}

CsvTable parse_csv(std::string_view text, std::string source) {
  CsvTable t;
  t.source = std::move(source);
  std::size_t lineNo = 0;
  bool haveHeader = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineNo;
    if (lineNo == 1 && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      std::string_view rest = trim(body.substr(1));
      const std::size_t eq = rest.find('=');
      if (eq != std::string_view::npos) {
        t.metadata.emplace_back(std::string(trim(rest.substr(0, eq))),
                                std::string(trim(rest.substr(eq + 1))));
      }
      continue;
    }
    const std::string where = t.source + ":" + std::to_string(lineNo);
    auto fields = split_fields(body, where);
    if (!haveHeader) {
      t.header = std::move(fields);
      haveHeader = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error(ErrorKind::Parse, where + ": expected " + std::to_string(t.header.size()) +
                                        " fields, found " + std::to_string(fields.size()));
    }
    t.rows.push_back({lineNo, std::move(fields)});
  }
  if (!haveHeader) throw Error(ErrorKind::Parse, t.source + ": no header row");
  return t;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "error reading " + path);
  return buf.str();
}

CsvTable read_csv_file(const std::string& path) { return parse_csv(read_text_file(path), path); }

double parse_double(std::string_view field, const std::string& where) {
  const std::string s(trim(field));
  if (s.empty()) throw Error(ErrorKind::Parse, where + ": empty number");
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw Error(ErrorKind::Parse, where + ": not a number: '" + s + "'");
  }
  return x;
}

std::int64_t parse_int(std::string_view field, const std::string& where) {
  const std::string_view s = trim(field);
  std::int64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::Parse, where + ": not an integer: '" + std::string(s) + "'");
  }
  return x;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void Metadata::add(std::string key, std::string value) {
  for (char& c : value) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void Metadata::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << "# " << k << '=' << v << '\n';
}

}  // namespace labornet
