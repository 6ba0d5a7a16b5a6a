#include "ffnav/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "ffnav/errors.hpp"

namespace ffnav::csv {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string num(double v, int precision) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

double to_double(const std::string& field, const std::string& context) {
  std::size_t b = field.find_first_not_of(" \t");
  std::size_t e = field.find_last_not_of(" \t");
  if (b == std::string::npos) throw ConfigError(context + ": empty numeric field");
  double v = 0.0;
  const char* first = field.data() + b;
  const char* last = field.data() + e + 1;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw ConfigError(context + ": not a number: '" + field + "'");
  return v;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("csv: missing column '" + name + "'");
}

Table read(const std::filesystem::path& path, const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  Table t;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!have_header) {
      if (!expected_header.empty() && line != expected_header) {
        throw ConfigError(path.string() + ": expected header '" + expected_header + "', got '" + line + "'");
      }
      t.header = split(line);
      have_header = true;
      continue;
    }
    auto row = split(line);
    if (row.size() != t.header.size()) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(t.header.size()) + " fields, got " + std::to_string(row.size()));
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw ConfigError(path.string() + ": empty file");
  return t;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace ffnav::csv
