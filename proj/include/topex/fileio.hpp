#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace topex {

/// Whole-file read. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal form that round-trips.
std::string format_double(double value);

/// RFC 4180 quoting when the field needs it.
std::string csv_field(std::string_view field);

/// Splits one CSV record; handles quoted fields. Fields are not trimmed.
std::vector<std::string> parse_csv_line(std::string_view line);

}  // namespace topex
