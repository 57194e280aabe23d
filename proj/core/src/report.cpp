#include "emoharness/report.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

#include "emoharness/csv.hpp"
#include "emoharness/errors.hpp"

namespace emoharness {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string signed_fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.4f", v);
  return buf;
}

std::string cell(std::size_t count, const std::optional<double>& share) {
  return std::to_string(count) + " (" + (share ? std::to_string(percent(*share)) + "%" : std::string("n/a")) + ")";
}

std::string pct_field(const std::optional<double>& share) {
  return share ? std::to_string(percent(*share)) : std::string{};
}

std::string title(const std::string& label) {
  std::string t = label;
  if (!t.empty() && t[0] >= 'a' && t[0] <= 'z') t[0] = static_cast<char>(t[0] - 'a' + 'A');
  return t;
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << text;
}

std::string file_safe(const std::string& label) {
  std::string out;
  for (char c : label) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  if (name == "csv") return ReportFormat::csv;
  throw ValidationError("unknown report format: " + std::string(name));
}

std::string render_confusion_markdown(const LabelScore& score) {
  const auto& c = score.confusion;
  const auto& r = score.rates;
  const std::string name = title(c.label);
  std::string out = "| Actual \\ Predicted | " + name + " | Not " + name + " |\n";
  out += "|---|---|---|\n";
  out += "| " + name + " | " + cell(c.tp, r.tp_rate) + " | " + cell(c.fn, r.fn_rate) + " |\n";
  out += "| Not " + name + " | " + cell(c.fp, r.fp_rate) + " | " + cell(c.tn, r.tn_rate) + " |\n";
  return out;
}

std::string render_markdown_report(const RunArtifact& a) {
  const auto& m = a.metrics;
  std::string out = "# Run " + a.run_id + "\n\n";
  out += "| Model | Type | Examples | F1 Macro | F1 Micro | N | Parse failures |\n";
  out += "|---|---|---|---|---|---|---|\n";
  out += "| " + a.model + " | " + a.strategy_label + " | " + std::to_string(a.example_count) + " | " +
         fixed(m.f1_macro) + " | " + fixed(m.f1_micro) + " | " + std::to_string(m.n_examples) + " | " +
         std::to_string(m.parse_failure_count) + " |\n\n";
  out += "Zero-division convention: 0. Macro average over all " + std::to_string(m.schema.size()) +
         " schema labels.\n\n";

  out += "## Per-emotion scores\n\n";
  out += "| Emotion | Precision | Recall | F1 |\n|---|---|---|---|\n";
  for (const auto& s : m.per_label) {
    out += "| " + title(s.confusion.label) + " | " + fixed(s.scores.precision) + " | " + fixed(s.scores.recall) +
           " | " + fixed(s.scores.f1) + " |\n";
  }
  out += "\n## Confusion matrices (counts and row percentages)\n";
  for (const auto& s : m.per_label) {
    out += "\n### Confusion matrix for " + title(s.confusion.label) + "\n\n";
    out += render_confusion_markdown(s);
  }
  return out;
}

std::vector<std::filesystem::path> emit_report(const RunArtifact& a, ReportFormat format,
                                               const std::filesystem::path& out_dir) {
  if (a.metrics.per_label.size() != a.metrics.schema.size() || a.metrics.n_examples == 0) {
    throw ValidationError("cannot report on an incomplete artifact: " + a.directory.string());
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> files;
  if (format == ReportFormat::markdown) {
    files.push_back(out_dir / "report.md");
    write(files.back(), render_markdown_report(a));
    return files;
  }

  const auto& m = a.metrics;
  std::string summary = "run_id,model,type,examples,f1_macro,f1_micro,n_examples,parse_failures\n";
  summary += csv::format_row({a.run_id, a.model, a.strategy_label, std::to_string(a.example_count),
                              fixed(m.f1_macro, 6), fixed(m.f1_micro, 6), std::to_string(m.n_examples),
                              std::to_string(m.parse_failure_count)});
  files.push_back(out_dir / "summary.csv");
  write(files.back(), summary);

  files.push_back(out_dir / "per_label.csv");
  write(files.back(), per_label_csv(m));

  for (const auto& s : m.per_label) {
    const auto& c = s.confusion;
    const auto& r = s.rates;
    std::string text = "actual,predicted_positive,predicted_negative,predicted_positive_pct,predicted_negative_pct\n";
    text += "positive," + std::to_string(c.tp) + ',' + std::to_string(c.fn) + ',' + pct_field(r.tp_rate) + ',' +
            pct_field(r.fn_rate) + '\n';
    text += "negative," + std::to_string(c.fp) + ',' + std::to_string(c.tn) + ',' + pct_field(r.fp_rate) + ',' +
            pct_field(r.tn_rate) + '\n';
    files.push_back(out_dir / ("confusion_" + file_safe(c.label) + ".csv"));
    write(files.back(), text);
  }
  return files;
}

RunComparison compare_artifacts(const RunArtifact& a, const RunArtifact& b) { return compare_runs(a.metrics, b.metrics); }

std::string render_comparison(const RunArtifact& a, const RunArtifact& b, const RunComparison& cmp,
                              ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "label,f1_a,f1_b,delta\n";
    for (const auto& d : cmp.per_label) {
      out += d.label + ',' + fixed(d.f1_a, 6) + ',' + fixed(d.f1_b, 6) + ',' + fixed(d.delta, 6) + '\n';
    }
    out += "f1_macro," + fixed(a.metrics.f1_macro, 6) + ',' + fixed(b.metrics.f1_macro, 6) + ',' +
           fixed(cmp.f1_macro_delta, 6) + '\n';
    return out;
  }
  const std::string name_a = a.run_id + " (" + a.model + ", " + a.strategy_label + ")";
  const std::string name_b = b.run_id + " (" + b.model + ", " + b.strategy_label + ")";
  std::string out = "# Per-emotion F1 comparison\n\n";
  out += "A: " + name_a + "\n\nB: " + name_b + "\n\n";
  out += "| Emotion | F1 A | F1 B | A - B |\n|---|---|---|---|\n";
  for (const auto& d : cmp.per_label) {
    out += "| " + title(d.label) + " | " + fixed(d.f1_a) + " | " + fixed(d.f1_b) + " | " + signed_fixed(d.delta) +
           " |\n";
  }
  out += "| **Macro** | " + fixed(a.metrics.f1_macro) + " | " + fixed(b.metrics.f1_macro) + " | " +
         signed_fixed(cmp.f1_macro_delta) + " |\n";
  out += "| **Micro** | " + fixed(a.metrics.f1_micro) + " | " + fixed(b.metrics.f1_micro) + " | " +
         signed_fixed(cmp.f1_micro_delta) + " |\n";
  return out;
}

}  // namespace emoharness
