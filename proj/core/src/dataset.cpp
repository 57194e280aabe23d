#include "emoharness/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "emoharness/csv.hpp"

namespace emoharness {

namespace {

std::string_view kind_name(DatasetError::Kind kind) {
  switch (kind) {
    case DatasetError::Kind::io: return "io error";
    case DatasetError::Kind::encoding: return "invalid encoding";
    case DatasetError::Kind::malformed_csv: return "malformed csv";
    case DatasetError::Kind::missing_column: return "missing column";
    case DatasetError::Kind::unexpected_column: return "unexpected column";
    case DatasetError::Kind::bad_label: return "bad label value";
    case DatasetError::Kind::duplicate_id: return "duplicate id";
    case DatasetError::Kind::empty_text: return "empty text";
  }
  return "error";
}

std::string describe(DatasetError::Kind kind, std::size_t row, std::size_t line, const std::string& column,
                     const std::string& detail) {
  std::string msg(kind_name(kind));
  if (row > 0) msg += " at row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
  if (!column.empty()) msg += ", column '" + column + "'";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace

DatasetError::DatasetError(Kind kind, std::size_t row, std::size_t line, std::string column, const std::string& detail)
    : ValidationError(describe(kind, row, line, column, detail)),
      kind_(kind),
      row_(row),
      line_(line),
      column_(std::move(column)) {}

std::string_view to_string(SplitName name) {
  switch (name) {
    case SplitName::train: return "train";
    case SplitName::dev: return "dev";
    case SplitName::test: return "test";
  }
  return "train";
}

SplitName split_name_from_path(const std::filesystem::path& path) {
  const std::string stem = fold_case(path.stem().string());
  auto has = [&](std::string_view token) { return stem.find(token) != std::string::npos; };
  if (has("dev") || has("valid")) return SplitName::dev;
  if (has("test")) return SplitName::test;
  return SplitName::train;
}

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

DatasetSplit parse_dataset(std::string_view text, const std::optional<LabelSchema>& schema, SplitName name) {
  using Kind = DatasetError::Kind;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  if (!is_valid_utf8(text)) throw DatasetError(Kind::encoding, 0, 0, {}, "input is not valid UTF-8");

  std::vector<csv::Record> records;
  try {
    records = csv::parse(text);
  } catch (const ValidationError& e) {
    throw DatasetError(Kind::malformed_csv, 0, 0, {}, e.what());
  }
  if (records.empty()) throw DatasetError(Kind::missing_column, 0, 1, "id", "header row is missing");

  const auto& header = records.front().fields;
  std::optional<std::size_t> id_col;
  std::optional<std::size_t> text_col;
  std::vector<std::pair<std::string, std::size_t>> label_cols;  // folded name, column
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string folded = fold_case(header[c]);
    if (folded == "id") {
      id_col = c;
    } else if (folded == "text") {
      text_col = c;
    } else {
      label_cols.emplace_back(folded, c);
    }
  }
  if (!id_col) throw DatasetError(Kind::missing_column, 0, 1, "id", "header has no id column");
  if (!text_col) throw DatasetError(Kind::missing_column, 0, 1, "text", "header has no text column");

  DatasetSplit split;
  split.name = name;
  std::vector<std::size_t> schema_cols;  // column index per schema label
  if (schema) {
    split.schema = *schema;
    for (const auto& label : schema->labels()) {
      auto it = std::find_if(label_cols.begin(), label_cols.end(), [&](const auto& p) { return p.first == label; });
      if (it == label_cols.end()) throw DatasetError(Kind::missing_column, 0, 1, label, "label column not in header");
      schema_cols.push_back(it->second);
    }
    for (const auto& [label, col] : label_cols) {
      if (!schema->index_of(label)) {
        throw DatasetError(Kind::unexpected_column, 0, 1, header[col], "column is not a label of the schema");
      }
    }
  } else {
    if (label_cols.empty()) throw DatasetError(Kind::missing_column, 0, 1, {}, "header has no label columns");
    std::vector<std::string> names;
    for (const auto& [label, col] : label_cols) {
      names.push_back(label);
      schema_cols.push_back(col);
    }
    try {
      split.schema = LabelSchema(std::move(names));
    } catch (const ValidationError& e) {
      throw DatasetError(Kind::unexpected_column, 0, 1, {}, e.what());
    }
  }

  std::unordered_set<std::string> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t row = r;
    if (rec.fields.size() != header.size()) {
      throw DatasetError(Kind::malformed_csv, row, rec.line, {},
                         "expected " + std::to_string(header.size()) + " fields, found " +
                             std::to_string(rec.fields.size()));
    }
    LabeledExample ex;
    ex.id = rec.fields[*id_col];
    ex.text = rec.fields[*text_col];
    if (ex.text.empty()) throw DatasetError(Kind::empty_text, row, rec.line, header[*text_col], {});
    if (!ids.insert(ex.id).second) throw DatasetError(Kind::duplicate_id, row, rec.line, header[*id_col], ex.id);
    ex.gold = LabelSet(split.schema.size());
    for (std::size_t k = 0; k < schema_cols.size(); ++k) {
      const std::string& cell = rec.fields[schema_cols[k]];
      if (cell == "1") {
        ex.gold.set(k);
      } else if (cell != "0") {
        throw DatasetError(Kind::bad_label, row, rec.line, header[schema_cols[k]],
                           "value '" + cell + "' is not 0 or 1");
      }
    }
    split.examples.push_back(std::move(ex));
  }
  return split;
}

DatasetSplit load_dataset(const std::filesystem::path& path, const std::optional<LabelSchema>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetError::Kind::io, 0, 0, {}, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), schema, split_name_from_path(path));
}

std::string serialize_dataset(const DatasetSplit& split) {
  std::vector<std::string> header{"id", "text"};
  for (const auto& label : split.schema.labels()) header.push_back(label);
  std::string out = csv::format_row(header);
  for (const auto& ex : split.examples) {
    std::vector<std::string> row{ex.id, ex.text};
    for (std::size_t k = 0; k < split.schema.size(); ++k) row.push_back(ex.gold.test(k) ? "1" : "0");
    out += csv::format_row(row);
  }
  return out;
}

void write_dataset(const DatasetSplit& split, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError(DatasetError::Kind::io, 0, 0, {}, "cannot write " + path.string());
  out << serialize_dataset(split);
}

std::size_t whitespace_token_count(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

TokenLengthHistogram dataset_stats(const DatasetSplit& split, std::size_t bucket_width) {
  if (split.empty()) throw ValidationError("dataset_stats: split is empty");
  if (bucket_width == 0) throw ValidationError("dataset_stats: bucket width must be positive");

  std::vector<std::size_t> lengths;
  lengths.reserve(split.size());
  for (const auto& ex : split.examples) lengths.push_back(whitespace_token_count(ex.text));
  const std::size_t longest = *std::max_element(lengths.begin(), lengths.end());

  TokenLengthHistogram h;
  h.bucket_width = bucket_width;
  h.total = lengths.size();
  const std::size_t n_buckets = longest / bucket_width + 1;
  for (std::size_t b = 0; b < n_buckets; ++b) h.buckets.push_back({b * bucket_width, (b + 1) * bucket_width, 0});
  for (auto len : lengths) ++h.buckets[len / bucket_width].count;
  return h;
}

std::string histogram_to_csv(const TokenLengthHistogram& histogram) {
  std::string out = "bucket_start,bucket_end,count\n";
  for (const auto& b : histogram.buckets) {
    out += std::to_string(b.start) + ',' + std::to_string(b.end) + ',' + std::to_string(b.count) + '\n';
  }
  return out;
}

SplitCountReport validate_against_expected(const DatasetSplit& split, std::size_t expected_count) {
  SplitCountReport report;
  report.expected = expected_count;
  report.actual = split.size();
  report.passed = report.expected == report.actual;
  report.summary = std::string(to_string(split.name)) + ": expected " + std::to_string(expected_count) +
                   " examples, found " + std::to_string(split.size()) + (report.passed ? " [PASS]" : " [FAIL]");
  return report;
}

}  // namespace emoharness
