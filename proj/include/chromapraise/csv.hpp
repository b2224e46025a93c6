#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace chromapraise {

/// Shortest decimal text that reads back to the same double. NaN becomes "".
std::string format_number(double v);

/// Strict parse of a full field; "" and "nan" give NaN. Throws FormatError.
double parse_number(std::string_view field);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index, or -1.
  [[nodiscard]] int column(std::string_view name) const;
  /// Column index; throws FormatError naming the missing column.
  [[nodiscard]] int require(std::string_view name) const;
};

/// RFC 4180 parser. Accepts CRLF or LF, quoted fields with embedded
/// separators, quotes and newlines. Every row must match the header width.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// One record terminated by LF. Fields containing , " CR or LF are quoted.
std::string csv_line(const std::vector<std::string>& fields);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace chromapraise
