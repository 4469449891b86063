#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fogcache::csv {

// Splits one CSV line into fields. Supports RFC 4180 double-quoted fields
// (no embedded newlines). Throws std::invalid_argument on an unterminated
// quote.
std::vector<std::string> split_line(std::string_view line);

// Quotes a field only when it contains a separator, quote or newline.
std::string escape(std::string_view field);

// Appends `fields` joined by commas plus a trailing LF.
void append_row(std::string& out, const std::vector<std::string>& fields);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// Fixed-precision formatting for report columns.
std::string format_fixed(double v, int digits);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Writes `content` to `path` via a temporary sibling file and a rename, so a
// reader never observes a partially written file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Reads the whole stream line by line, stripping a trailing '\r'.
bool read_line(std::istream& in, std::string& line);

}  // namespace fogcache::csv
