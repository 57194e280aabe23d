#include "emoharness/response_parser.hpp"

#include <cctype>

#include "emoharness/errors.hpp"

namespace emoharness {

std::string_view to_string(ParsePolicy policy) { return policy == ParsePolicy::strict ? "strict" : "lenient"; }

std::string_view to_string(ParseStatus status) {
  switch (status) {
    case ParseStatus::clean: return "clean";
    case ParseStatus::recovered: return "recovered";
    case ParseStatus::failed: return "failed";
  }
  return "failed";
}

ParsePolicy parse_policy_from(std::string_view name) {
  if (name == "strict") return ParsePolicy::strict;
  if (name == "lenient") return ParsePolicy::lenient;
  throw ValidationError("unknown parse policy: " + std::string(name));
}

ParseStatus parse_status_from(std::string_view name) {
  if (name == "clean") return ParseStatus::clean;
  if (name == "recovered") return ParseStatus::recovered;
  if (name == "failed") return ParseStatus::failed;
  throw ValidationError("unknown parse status: " + std::string(name));
}

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view trim_blank(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

bool is_token_junk(char c) { return is_blank(c) || c == '"' || c == '\'' || c == '`' || c == '.'; }

std::string_view trim_token(std::string_view s) {
  while (!s.empty() && is_token_junk(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_token_junk(s.back())) s.remove_suffix(1);
  return s;
}

bool starts_with_nocase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::vector<std::string_view> split_lines(std::string_view raw) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= raw.size()) {
    auto nl = raw.find('\n', start);
    if (nl == std::string_view::npos) nl = raw.size();
    lines.push_back(trim_blank(raw.substr(start, nl - start)));
    start = nl + 1;
  }
  return lines;
}

struct Candidate {
  std::string_view line;
  std::string_view payload;
};

// Last line carrying `cue`; an empty payload borrows the next nonblank line.
std::optional<Candidate> find_cue(const std::vector<std::string_view>& lines, std::string_view cue) {
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (!starts_with_nocase(lines[i], cue)) continue;
    Candidate c{lines[i], trim_blank(lines[i].substr(cue.size()))};
    if (c.payload.empty()) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        if (!lines[j].empty()) {
          c.payload = lines[j];
          break;
        }
      }
    }
    return c;
  }
  return std::nullopt;
}

ParsedResponse failure(const LabelSchema& schema, std::vector<std::string> unknown = {}) {
  ParsedResponse r;
  r.labels = LabelSet(schema.size());
  r.status = ParseStatus::failed;
  r.unknown_tokens = std::move(unknown);
  return r;
}

}  // namespace

ParsedResponse parse_emotions(std::string_view raw, const LabelSchema& schema, ParsePolicy policy) {
  const auto lines = split_lines(raw);

  std::optional<Candidate> candidate = find_cue(lines, "Final Emotions:");
  if (!candidate) candidate = find_cue(lines, "Emotions:");
  if (!candidate) {
    for (std::size_t i = lines.size(); i-- > 0;) {
      if (!lines[i].empty()) {
        candidate = Candidate{lines[i], lines[i]};
        break;
      }
    }
  }
  if (!candidate) return failure(schema);

  std::vector<std::string> tokens;
  std::string_view rest = candidate->payload;
  for (;;) {
    const auto comma = rest.find(',');
    const auto token = trim_token(rest.substr(0, comma));
    if (!token.empty()) tokens.push_back(fold_case(token));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (tokens.empty()) return failure(schema);

  ParsedResponse r;
  r.labels = LabelSet(schema.size());
  if (tokens.size() == 1 && tokens.front() == "none") {
    r.status = ParseStatus::clean;
    r.source_line = std::string(candidate->line);
    return r;
  }

  std::size_t matched = 0;
  for (auto& token : tokens) {
    if (auto idx = schema.index_of(token)) {
      r.labels.set(*idx);
      ++matched;
    } else {
      r.unknown_tokens.push_back(std::move(token));
    }
  }
  if (r.unknown_tokens.empty()) {
    r.status = ParseStatus::clean;
  } else if (policy == ParsePolicy::lenient && matched > 0) {
    r.status = ParseStatus::recovered;
  } else {
    return failure(schema, std::move(r.unknown_tokens));
  }
  r.source_line = std::string(candidate->line);
  return r;
}

}  // namespace emoharness
