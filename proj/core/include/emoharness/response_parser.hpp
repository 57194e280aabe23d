#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emoharness/labels.hpp"

namespace emoharness {

enum class ParsePolicy { strict, lenient };
enum class ParseStatus { clean, recovered, failed };

std::string_view to_string(ParsePolicy policy);
std::string_view to_string(ParseStatus status);
ParsePolicy parse_policy_from(std::string_view name);
ParseStatus parse_status_from(std::string_view name);

struct ParsedResponse {
  LabelSet labels;  // empty set when failed
  ParseStatus status = ParseStatus::failed;
  std::vector<std::string> unknown_tokens;
  std::optional<std::string> source_line;  // absent when failed
};

/// Reads a label set out of free-form model output.
///
/// Candidate line, scanning from the end: the last line starting with
/// "Final Emotions:", else the last starting with "Emotions:", else the last
/// nonblank line. A cue line with nothing after the colon takes the next
/// nonblank line as its payload. The payload is split on commas; each token is
/// trimmed of whitespace, quotes and periods, then matched case-insensitively
/// against the schema. A lone "None" is the empty set.
///
/// strict: any unknown token fails the parse. lenient: unknown tokens are
/// dropped (status recovered) as long as at least one label matched.
/// Never throws.
ParsedResponse parse_emotions(std::string_view raw, const LabelSchema& schema, ParsePolicy policy);

}  // namespace emoharness
