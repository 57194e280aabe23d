#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emoharness/labels.hpp"
#include "emoharness/metrics.hpp"
#include "emoharness/response_parser.hpp"

namespace emoharness {

/// Trace of one evaluated example.
struct RunRecord {
  std::string example_id;
  std::string prompt_hash;
  std::string raw_response;
  ParseStatus status = ParseStatus::failed;
  std::vector<std::string> unknown_tokens;
  LabelSet predicted;
  LabelSet gold;
  std::optional<std::string> error;  // set when the provider call failed
  // Volatile per-call data, kept out of records.jsonl so that replays are
  // byte-identical; persisted to trace.jsonl instead.
  double latency_ms = 0.0;
  bool from_cache = false;
  int attempt_count = 0;
};

/// Deterministic JSON line (no trailing newline) for records.jsonl.
std::string record_line(const RunRecord& record, const LabelSchema& schema);
/// id, latency_ms, from_cache, attempt_count for trace.jsonl.
std::string trace_line(const RunRecord& record);

/// Reads records.jsonl, joined with trace.jsonl when present.
std::vector<RunRecord> load_records(const std::filesystem::path& run_dir, const LabelSchema& schema);

struct TimingSummary {
  std::string started_at;
  std::string finished_at;
  double wall_ms = 0.0;
  std::size_t cache_hits = 0;
  std::size_t provider_attempts = 0;
  std::size_t failed_slots = 0;
};

enum class ArtifactKind { prompting, imported };

/// A completed run directory.
///
///   config.json            resolved config snapshot
///   records.jsonl          one RunRecord per eval example, eval order
///   trace.jsonl            latency / cache / attempt data per record
///   predictions.csv        id + per-label 0/1 columns
///   metrics_per_label.csv
///   metrics_summary.csv
///   artifact.json          metadata, metrics and timing; written last
struct RunArtifact {
  std::filesystem::path directory;
  std::string run_id;
  ArtifactKind kind = ArtifactKind::prompting;
  std::string model;
  std::string strategy_label;  // "Few-Shot", "Imported", ...
  std::size_t example_count = 0;
  std::string config_snapshot;
  MetricsReport metrics;
  TimingSummary timing;
};

namespace artifact_files {
inline constexpr std::string_view config = "config.json";
inline constexpr std::string_view records = "records.jsonl";
inline constexpr std::string_view trace = "trace.jsonl";
inline constexpr std::string_view predictions = "predictions.csv";
inline constexpr std::string_view per_label = "metrics_per_label.csv";
inline constexpr std::string_view summary = "metrics_summary.csv";
inline constexpr std::string_view manifest = "artifact.json";
}  // namespace artifact_files

std::string artifact_manifest_json(const RunArtifact& artifact);

/// Throws ValidationError when the directory is not a complete artifact.
RunArtifact load_artifact(const std::filesystem::path& run_dir);

/// Same CSV shape that score_predictions ingests.
std::string predictions_csv(const std::vector<std::string>& ids, const std::vector<LabelSet>& predictions,
                            const LabelSchema& schema);

/// Writes `contents` to `path` through a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Current UTC time, ISO-8601 with milliseconds.
std::string utc_timestamp();

}  // namespace emoharness
