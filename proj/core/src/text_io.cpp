#include "dpplimits/text_io.hpp"

#include <charconv>
#include <istream>
#include <system_error>

#include "dpplimits/error.hpp"

namespace dpplimits::text_io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size() && !token.empty();
}

bool parse_size(std::string_view token, std::size_t& out) {
  const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size() && !token.empty();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::size_t read_size_header(std::istream& in, std::string_view key) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header '" + std::string(key) + "=<value>'");
  const auto header = trim(line);
  const std::string prefix = std::string(key) + "=";
  std::size_t value = 0;
  if (header.substr(0, prefix.size()) != prefix || !parse_size(header.substr(prefix.size()), value)) {
    throw ParseError(1, "expected header '" + prefix + "<value>', got '" + std::string(header) + "'");
  }
  return value;
}

std::vector<double> read_rows(std::istream& in, std::size_t width, std::size_t& rows) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 1;
  rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() != width) {
      throw DimensionMismatch(line_no, "expected " + std::to_string(width) + " values, found " +
                                           std::to_string(tokens.size()));
    }
    for (const auto tok : tokens) {
      double v = 0.0;
      if (!parse_double(tok, v)) {
        throw ParseError(line_no, "cannot parse number '" + std::string(tok) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  return values;
}

}  // namespace dpplimits::text_io
