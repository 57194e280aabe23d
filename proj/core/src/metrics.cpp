#include "emoharness/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "emoharness/errors.hpp"

namespace emoharness {

namespace {

void check_aligned(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, const LabelSchema& schema) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) + " entries but predictions have " +
                          std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].width() != schema.size() || pred[i].width() != schema.size()) {
      throw ValidationError("label set at position " + std::to_string(i) + " does not match the schema width");
    }
  }
}

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double harmonic(double precision, double recall) {
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; }

}  // namespace

LabelConfusion confusion(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred,
                         const LabelSchema& schema, std::size_t label_index) {
  check_aligned(gold, pred, schema);
  if (label_index >= schema.size()) throw ValidationError("label index out of range");
  LabelConfusion c;
  c.label = schema[label_index];
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i].test(label_index);
    const bool p = pred[i].test(label_index);
    if (g && p) {
      ++c.tp;
    } else if (g) {
      ++c.fn;
    } else if (p) {
      ++c.fp;
    } else {
      ++c.tn;
    }
  }
  return c;
}

LabelRates rates(const LabelConfusion& c) {
  LabelRates r;
  if (const auto pos = c.tp + c.fn; pos > 0) {
    r.tp_rate = static_cast<double>(c.tp) / static_cast<double>(pos);
    // Complement of the same row, computed from counts so the pair sums to 1.
    r.fn_rate = static_cast<double>(c.fn) / static_cast<double>(pos);
  }
  if (const auto neg = c.tn + c.fp; neg > 0) {
    r.tn_rate = static_cast<double>(c.tn) / static_cast<double>(neg);
    r.fp_rate = static_cast<double>(c.fp) / static_cast<double>(neg);
  }
  return r;
}

PrecisionRecallF1 f1_per_label(const LabelConfusion& c) {
  PrecisionRecallF1 s;
  s.precision = safe_ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  s.recall = safe_ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  s.f1 = harmonic(s.precision, s.recall);
  return s;
}

double f1_macro(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, const LabelSchema& schema) {
  if (gold.empty()) throw ValidationError("f1_macro: no examples");
  double sum = 0.0;
  for (std::size_t k = 0; k < schema.size(); ++k) sum += f1_per_label(confusion(gold, pred, schema, k)).f1;
  return sum / static_cast<double>(schema.size());
}

double f1_micro(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, const LabelSchema& schema) {
  if (gold.empty()) throw ValidationError("f1_micro: no examples");
  LabelConfusion pooled;
  for (std::size_t k = 0; k < schema.size(); ++k) {
    const auto c = confusion(gold, pred, schema, k);
    pooled.tp += c.tp;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
  }
  return f1_per_label(pooled).f1;
}

MetricsReport evaluate(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, const LabelSchema& schema,
                       std::size_t parse_failure_count) {
  if (gold.empty()) throw ValidationError("cannot score an empty set of examples");
  MetricsReport report;
  report.schema = schema;
  report.n_examples = gold.size();
  report.parse_failure_count = parse_failure_count;
  for (std::size_t k = 0; k < schema.size(); ++k) {
    LabelScore s;
    s.confusion = confusion(gold, pred, schema, k);
    s.rates = rates(s.confusion);
    s.scores = f1_per_label(s.confusion);
    report.per_label.push_back(std::move(s));
  }
  report.f1_macro = f1_macro(gold, pred, schema);
  report.f1_micro = f1_micro(gold, pred, schema);
  return report;
}

RunComparison compare_runs(const MetricsReport& a, const MetricsReport& b) {
  if (!(a.schema == b.schema)) throw ValidationError("cannot compare runs with different label schemas");
  RunComparison cmp;
  for (std::size_t k = 0; k < a.per_label.size(); ++k) {
    const double fa = a.per_label[k].scores.f1;
    const double fb = b.per_label[k].scores.f1;
    cmp.per_label.push_back({a.schema[k], fa, fb, fa - fb});
  }
  cmp.f1_macro_delta = a.f1_macro - b.f1_macro;
  cmp.f1_micro_delta = a.f1_micro - b.f1_micro;
  return cmp;
}

std::string per_label_csv(const MetricsReport& report) {
  std::string out = "label,tp,fp,fn,tn,tp_rate,fn_rate,tn_rate,fp_rate,precision,recall,f1\n";
  for (const auto& s : report.per_label) {
    const auto& c = s.confusion;
    out += c.label + ',' + std::to_string(c.tp) + ',' + std::to_string(c.fp) + ',' + std::to_string(c.fn) + ',' +
           std::to_string(c.tn) + ',' + fmt(s.rates.tp_rate) + ',' + fmt(s.rates.fn_rate) + ',' +
           fmt(s.rates.tn_rate) + ',' + fmt(s.rates.fp_rate) + ',' + fmt(s.scores.precision) + ',' +
           fmt(s.scores.recall) + ',' + fmt(s.scores.f1) + '\n';
  }
  return out;
}

std::string summary_csv(const MetricsReport& report) {
  return "f1_macro,f1_micro,n_examples,parse_failures\n" + fmt(report.f1_macro) + ',' + fmt(report.f1_micro) + ',' +
         std::to_string(report.n_examples) + ',' + std::to_string(report.parse_failure_count) + '\n';
}

int percent(double share) { return static_cast<int>(std::lround(share * 100.0)); }

}  // namespace emoharness
