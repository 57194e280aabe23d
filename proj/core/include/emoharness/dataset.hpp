#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emoharness/errors.hpp"
#include "emoharness/labels.hpp"

namespace emoharness {

struct LabeledExample {
  std::string id;
  std::string text;
  LabelSet gold;
};

enum class SplitName { train, dev, test };

std::string_view to_string(SplitName name);
/// Guesses the split from a file name ("eng_dev.csv" -> dev). Defaults to train.
SplitName split_name_from_path(const std::filesystem::path& path);

struct DatasetSplit {
  SplitName name = SplitName::train;
  LabelSchema schema;
  std::vector<LabeledExample> examples;

  std::size_t size() const noexcept { return examples.size(); }
  bool empty() const noexcept { return examples.empty(); }
};

/// Row-level ingestion failure. `row` is the 1-based data row (header excluded),
/// 0 when the problem is in the header or the file as a whole.
class DatasetError : public ValidationError {
 public:
  enum class Kind { io, encoding, malformed_csv, missing_column, unexpected_column, bad_label, duplicate_id, empty_text };

  DatasetError(Kind kind, std::size_t row, std::size_t line, std::string column, const std::string& detail);

  Kind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t row_;
  std::size_t line_;
  std::string column_;
};

/// Parses a dataset from CSV text: `id`, `text`, then one 0/1 column per label.
/// When `schema` is absent it is inferred from the header (label columns in file
/// order, case-folded). When present, the header must carry exactly those labels.
DatasetSplit parse_dataset(std::string_view csv_text, const std::optional<LabelSchema>& schema,
                           SplitName name = SplitName::train);

DatasetSplit load_dataset(const std::filesystem::path& path, const std::optional<LabelSchema>& schema = std::nullopt);

std::string serialize_dataset(const DatasetSplit& split);
void write_dataset(const DatasetSplit& split, const std::filesystem::path& path);

/// True when `bytes` is well-formed UTF-8 (no overlongs, no surrogates).
bool is_valid_utf8(std::string_view bytes);

/// Whitespace token count.
std::size_t whitespace_token_count(std::string_view text);

struct HistogramBucket {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::size_t count = 0;
};

struct TokenLengthHistogram {
  std::size_t bucket_width = 0;
  std::vector<HistogramBucket> buckets;
  std::size_t total = 0;
};

/// Buckets [k*w, (k+1)*w) from 0 up to the bucket holding the longest example;
/// interior empty buckets are kept. Throws ValidationError on an empty split or w == 0.
TokenLengthHistogram dataset_stats(const DatasetSplit& split, std::size_t bucket_width);

/// `bucket_start,bucket_end,count` rows with header.
std::string histogram_to_csv(const TokenLengthHistogram& histogram);

struct SplitCountReport {
  bool passed = false;
  std::size_t expected = 0;
  std::size_t actual = 0;
  std::string summary;
};

SplitCountReport validate_against_expected(const DatasetSplit& split, std::size_t expected_count);

}  // namespace emoharness
