#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bipartite {

// Minimal RFC4180-ish CSV: optional double-quoted fields with "" escapes,
// LF or CRLF line ends, no embedded newlines inside fields.
struct CsvTable {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t col(const std::string& name) const;
  // col() or a MissingColumn error naming the file.
  std::size_t require_col(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Strict double parse; context appears in the BadFormat error.
double parse_double_field(const std::string& field, const std::string& context);
// Shortest representation that round-trips bit-exactly.
std::string format_double(double v);

}  // namespace bipartite
