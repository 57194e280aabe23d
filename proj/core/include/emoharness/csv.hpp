#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace emoharness::csv {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

/// Parses comma-separated text with RFC 4180 quoting. Accepts LF or CRLF
/// line endings and a trailing newline; a blank final line is not a record.
/// Throws ValidationError on an unterminated quote or stray quote character.
std::vector<Record> parse(std::string_view text);

/// Quotes the field if it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string format_row(const std::vector<std::string>& fields);

}  // namespace emoharness::csv
