#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small helpers shared by every delimited-text reader and writer.
namespace netsample::csv {

std::string_view trim(std::string_view s) noexcept;

/// Splits on `delim`; fields are trimmed, empty fields are kept.
std::vector<std::string_view> split(std::string_view line, char delim = ',');

std::optional<std::int64_t> parse_int(std::string_view s) noexcept;
std::optional<double> parse_double(std::string_view s) noexcept;

/// Shortest decimal text that reads back to the identical double.
std::string format_double(double x);

/// Reads `path` line by line, skipping blank lines and `#` comments. The
/// callback receives the 1-based line number and the trimmed line.
void for_each_line(std::istream& in,
                   const std::function<void(std::size_t, std::string_view)>& fn);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file then renames over `path`, so readers
/// never observe a partially written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace netsample::csv
