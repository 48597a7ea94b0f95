#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace collgram::io {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

std::optional<std::uint64_t> parse_u64(std::string_view s);
std::optional<double> parse_double(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// RFC 4180 quoting when the field contains a comma, quote or line break.
std::string csv_field(std::string_view s);

}  // namespace collgram::io
