#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "regdev/error.hpp"

namespace regdev::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> fields;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Splits RFC-4180 text into rows. Unquoted fields are trimmed of spaces and
/// tabs. Blank lines and lines starting with '#' are skipped; those are how
/// the command-line tool embeds provenance headers in its output files.
inline std::vector<Row> read_rows(std::string_view text, char delimiter = ',') {
  std::vector<Row> rows;
  std::size_t pos = 0;
  std::size_t line = 1;
  // Skip a UTF-8 byte order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;

  while (pos < text.size()) {
    if (text[pos] == '\n' || text[pos] == '\r') {
      if (text[pos] == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      ++pos;
      ++line;
      continue;
    }
    if (text[pos] == '#') {
      while (pos < text.size() && text[pos] != '\n') ++pos;
      continue;
    }

    Row row;
    row.line = line;
    bool end_of_row = false;
    while (!end_of_row) {
      std::string field;
      // Leading whitespace before an opening quote is ignored.
      std::size_t probe = pos;
      while (probe < text.size() && (text[probe] == ' ' || text[probe] == '\t')) ++probe;
      if (probe < text.size() && text[probe] == '"') {
        pos = probe + 1;
        const std::size_t open_line = line;
        for (;;) {
          if (pos >= text.size()) {
            throw DataError("line " + std::to_string(open_line) + ": unterminated quoted field");
          }
          const char c = text[pos];
          if (c == '"') {
            if (pos + 1 < text.size() && text[pos + 1] == '"') {
              field.push_back('"');
              pos += 2;
              continue;
            }
            ++pos;
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
          ++pos;
        }
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
        if (pos < text.size() && text[pos] != delimiter && text[pos] != '\n' && text[pos] != '\r') {
          throw DataError("line " + std::to_string(line) + ": unexpected character after quoted field");
        }
      } else {
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != delimiter && text[pos] != '\n' && text[pos] != '\r') {
          if (text[pos] == '"') {
            throw DataError("line " + std::to_string(line) + ": stray quote in unquoted field");
          }
          ++pos;
        }
        field = std::string(detail::trim(text.substr(start, pos - start)));
      }
      row.fields.push_back(std::move(field));

      if (pos < text.size() && text[pos] == delimiter) {
        ++pos;
      } else {
        end_of_row = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Quotes a field when it would not survive read_rows unchanged.
inline std::string quote(std::string_view field, char delimiter = ',') {
  bool needs = field.empty() == false &&
               (field.front() == ' ' || field.front() == '\t' || field.back() == ' ' ||
                field.back() == '\t' || field.front() == '#');
  for (char c : field) {
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') needs = true;
  }
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Strict decimal parse: the whole token must be consumed. Non-finite
/// spellings ("inf", "nan") parse successfully and are left for the caller
/// to reject.
inline std::optional<double> parse_number(std::string_view token) {
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace regdev::csv
