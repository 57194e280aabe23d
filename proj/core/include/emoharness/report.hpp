#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "emoharness/artifact.hpp"
#include "emoharness/metrics.hpp"

namespace emoharness {

enum class ReportFormat { markdown, csv };

ReportFormat parse_report_format(std::string_view name);

/// Summary table, per-label scores, and one confusion table per label with
/// counts and row percentages.
std::string render_markdown_report(const RunArtifact& artifact);

/// 2x2 confusion table for one label: rows are the true class, each cell
/// "count (pct%)" with percentages normalized per row.
std::string render_confusion_markdown(const LabelScore& score);

/// Writes the report into `out_dir` (created if missing) and returns the paths.
/// markdown: report.md. csv: summary.csv, per_label.csv, confusion_<label>.csv.
std::vector<std::filesystem::path> emit_report(const RunArtifact& artifact, ReportFormat format,
                                               const std::filesystem::path& out_dir);

/// Throws ValidationError on schema mismatch.
RunComparison compare_artifacts(const RunArtifact& a, const RunArtifact& b);

std::string render_comparison(const RunArtifact& a, const RunArtifact& b, const RunComparison& comparison,
                              ReportFormat format);

}  // namespace emoharness
