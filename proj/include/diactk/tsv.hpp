#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace diactk::tsv {

struct Row {
  size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> cells;
};

// Splits one line on tabs; no quoting or escapes.
std::vector<std::string> split(std::string_view line);

std::string trim(std::string_view text);

// Reads a TSV file. Blank lines and lines starting with '#' are dropped.
// Throws std::runtime_error when the file cannot be opened.
std::vector<Row> read_rows(const std::string& path);

// Same, over an in-memory buffer.
std::vector<Row> parse_rows(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace diactk::tsv
