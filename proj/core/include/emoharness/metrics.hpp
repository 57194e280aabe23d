#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "emoharness/labels.hpp"

namespace emoharness {

struct LabelConfusion {
  std::string label;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const LabelConfusion&, const LabelConfusion&) = default;
};

/// Row-normalized shares. A row with no members has no rates.
struct LabelRates {
  std::optional<double> tp_rate;  // tp / (tp + fn)
  std::optional<double> fn_rate;
  std::optional<double> tn_rate;  // tn / (tn + fp)
  std::optional<double> fp_rate;

  friend bool operator==(const LabelRates&, const LabelRates&) = default;
};

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const PrecisionRecallF1&, const PrecisionRecallF1&) = default;
};

struct LabelScore {
  LabelConfusion confusion;
  LabelRates rates;
  PrecisionRecallF1 scores;

  friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

struct MetricsReport {
  LabelSchema schema;
  std::vector<LabelScore> per_label;  // schema order
  double f1_macro = 0.0;
  double f1_micro = 0.0;
  std::size_t n_examples = 0;
  std::size_t parse_failure_count = 0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// One-vs-rest counts for `label_index`. Throws ValidationError on length or
/// width mismatch.
LabelConfusion confusion(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred,
                         const LabelSchema& schema, std::size_t label_index);

LabelRates rates(const LabelConfusion& c);

/// Zero denominators yield 0 for the affected quantity.
PrecisionRecallF1 f1_per_label(const LabelConfusion& c);

/// Unweighted mean over every schema label. Throws ValidationError on empty input.
double f1_macro(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, const LabelSchema& schema);

/// F1 over tp/fp/fn pooled across labels. Throws ValidationError on empty input.
double f1_micro(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, const LabelSchema& schema);

MetricsReport evaluate(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, const LabelSchema& schema,
                       std::size_t parse_failure_count = 0);

struct LabelDelta {
  std::string label;
  double f1_a = 0.0;
  double f1_b = 0.0;
  double delta = 0.0;  // a - b
};

struct RunComparison {
  std::vector<LabelDelta> per_label;
  double f1_macro_delta = 0.0;
  double f1_micro_delta = 0.0;
};

/// Throws ValidationError when the schemas differ.
RunComparison compare_runs(const MetricsReport& a, const MetricsReport& b);

/// `label,tp,fp,fn,tn,tp_rate,fn_rate,tn_rate,fp_rate,precision,recall,f1`;
/// absent rates are empty cells.
std::string per_label_csv(const MetricsReport& report);
/// `f1_macro,f1_micro,n_examples,parse_failures`
std::string summary_csv(const MetricsReport& report);

/// Nearest integer percent, e.g. 0.875 -> 88.
int percent(double share);

}  // namespace emoharness
