#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ffnav::csv {

std::vector<std::string> split(const std::string& line);

// Shortest-enough text for a double; 17 significant digits round-trips exactly.
std::string num(double v, int precision = 17);

// Parses a full field as a double. Throws ConfigError naming the context on failure.
double to_double(const std::string& field, const std::string& context);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name, throws ConfigError when absent.
  std::size_t column(const std::string& name) const;
};

// Reads a comma-separated file with a header row. Blank lines are skipped.
// When expected_header is non-empty the header must match it exactly.
Table read(const std::filesystem::path& path, const std::string& expected_header = {});

std::ofstream open_for_write(const std::filesystem::path& path);

}  // namespace ffnav::csv
