#pragma once

// Shared helpers for the plain-text matrix formats (points, kernels, CSV).

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dpplimits::text_io {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a full token as a double; returns false on any trailing garbage.
bool parse_double(std::string_view token, double& out);
bool parse_size(std::string_view token, std::size_t& out);

std::vector<std::string_view> split_whitespace(std::string_view line);
std::string_view trim(std::string_view s);

/// Reads `key=<value>` header (e.g. `d=3`). Throws ParseError on line 1.
std::size_t read_size_header(std::istream& in, std::string_view key);

/// Reads whitespace-separated numeric rows of exactly `width` values.
/// Blank lines are skipped; a row of the wrong width raises DimensionMismatch
/// naming its line number.
std::vector<double> read_rows(std::istream& in, std::size_t width, std::size_t& rows);

}  // namespace dpplimits::text_io
