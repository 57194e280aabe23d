#include "emoharness/artifact.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>

#include "emoharness/csv.hpp"
#include "emoharness/errors.hpp"

namespace emoharness {

using json = nlohmann::ordered_json;

namespace {

constexpr auto kReplace = json::error_handler_t::replace;

json label_names(const LabelSet& set, const LabelSchema& schema) { return json(set.names(schema)); }

LabelSet labels_from_json(const json& names, const LabelSchema& schema) {
  LabelSet set(schema.size());
  for (const auto& n : names) {
    auto idx = schema.index_of(n.get<std::string>());
    if (!idx) throw ValidationError("record refers to label outside the schema: " + n.get<std::string>());
    set.set(*idx);
  }
  return set;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json metrics_to_json(const MetricsReport& m) {
  json j;
  j["schema"] = m.schema.labels();
  j["f1_macro"] = m.f1_macro;
  j["f1_micro"] = m.f1_micro;
  j["n_examples"] = m.n_examples;
  j["parse_failure_count"] = m.parse_failure_count;
  j["zero_division"] = 0;
  j["macro_average_over"] = "all_schema_labels";
  j["per_label"] = json::array();
  for (const auto& s : m.per_label) {
    json row;
    row["label"] = s.confusion.label;
    row["tp"] = s.confusion.tp;
    row["fp"] = s.confusion.fp;
    row["fn"] = s.confusion.fn;
    row["tn"] = s.confusion.tn;
    row["tp_rate"] = optional_number(s.rates.tp_rate);
    row["fn_rate"] = optional_number(s.rates.fn_rate);
    row["tn_rate"] = optional_number(s.rates.tn_rate);
    row["fp_rate"] = optional_number(s.rates.fp_rate);
    row["precision"] = s.scores.precision;
    row["recall"] = s.scores.recall;
    row["f1"] = s.scores.f1;
    j["per_label"].push_back(std::move(row));
  }
  return j;
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport m;
  m.schema = LabelSchema(j.at("schema").get<std::vector<std::string>>());
  m.f1_macro = j.at("f1_macro").get<double>();
  m.f1_micro = j.at("f1_micro").get<double>();
  m.n_examples = j.at("n_examples").get<std::size_t>();
  m.parse_failure_count = j.at("parse_failure_count").get<std::size_t>();
  for (const auto& row : j.at("per_label")) {
    LabelScore s;
    s.confusion.label = row.at("label").get<std::string>();
    s.confusion.tp = row.at("tp").get<std::size_t>();
    s.confusion.fp = row.at("fp").get<std::size_t>();
    s.confusion.fn = row.at("fn").get<std::size_t>();
    s.confusion.tn = row.at("tn").get<std::size_t>();
    s.rates.tp_rate = number_or_null(row.at("tp_rate"));
    s.rates.fn_rate = number_or_null(row.at("fn_rate"));
    s.rates.tn_rate = number_or_null(row.at("tn_rate"));
    s.rates.fp_rate = number_or_null(row.at("fp_rate"));
    s.scores.precision = row.at("precision").get<double>();
    s.scores.recall = row.at("recall").get<double>();
    s.scores.f1 = row.at("f1").get<double>();
    m.per_label.push_back(std::move(s));
  }
  if (m.per_label.size() != m.schema.size()) throw ValidationError("metrics per_label does not match schema");
  return m;
}

std::string_view kind_name(ArtifactKind kind) { return kind == ArtifactKind::prompting ? "prompting" : "imported"; }

}  // namespace

std::string record_line(const RunRecord& r, const LabelSchema& schema) {
  json j;
  j["id"] = r.example_id;
  j["prompt_hash"] = r.prompt_hash;
  j["raw_response"] = r.raw_response;
  j["status"] = to_string(r.status);
  j["unknown_tokens"] = r.unknown_tokens;
  j["predicted"] = label_names(r.predicted, schema);
  j["gold"] = label_names(r.gold, schema);
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  return j.dump(-1, ' ', false, kReplace);
}

std::string trace_line(const RunRecord& r) {
  json j;
  j["id"] = r.example_id;
  j["latency_ms"] = r.latency_ms;
  j["from_cache"] = r.from_cache;
  j["attempt_count"] = r.attempt_count;
  return j.dump(-1, ' ', false, kReplace);
}

std::vector<RunRecord> load_records(const std::filesystem::path& run_dir, const LabelSchema& schema) {
  const auto records_path = run_dir / artifact_files::records;
  if (!std::filesystem::exists(records_path)) throw ValidationError("missing " + records_path.string());

  std::unordered_map<std::string, json> traces;
  if (const auto trace_path = run_dir / artifact_files::trace; std::filesystem::exists(trace_path)) {
    std::istringstream in(read_file(trace_path));
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      auto t = json::parse(line);
      auto id = t.at("id").get<std::string>();
      traces[std::move(id)] = std::move(t);
    }
  }

  std::vector<RunRecord> out;
  std::istringstream in(read_file(records_path));
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      RunRecord r;
      r.example_id = j.at("id").get<std::string>();
      r.prompt_hash = j.at("prompt_hash").get<std::string>();
      r.raw_response = j.at("raw_response").get<std::string>();
      r.status = parse_status_from(j.at("status").get<std::string>());
      r.unknown_tokens = j.at("unknown_tokens").get<std::vector<std::string>>();
      r.predicted = labels_from_json(j.at("predicted"), schema);
      r.gold = labels_from_json(j.at("gold"), schema);
      if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
      if (auto it = traces.find(r.example_id); it != traces.end()) {
        r.latency_ms = it->second.value("latency_ms", 0.0);
        r.from_cache = it->second.value("from_cache", false);
        r.attempt_count = it->second.value("attempt_count", 0);
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ValidationError(records_path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string artifact_manifest_json(const RunArtifact& a) {
  json j;
  j["format"] = "emoharness-run/1";
  j["run_id"] = a.run_id;
  j["kind"] = kind_name(a.kind);
  j["model"] = a.model;
  j["strategy"] = a.strategy_label;
  j["example_count"] = a.example_count;
  j["metrics"] = metrics_to_json(a.metrics);
  j["timing"]["started_at"] = a.timing.started_at;
  j["timing"]["finished_at"] = a.timing.finished_at;
  j["timing"]["wall_ms"] = a.timing.wall_ms;
  j["timing"]["cache_hits"] = a.timing.cache_hits;
  j["timing"]["provider_attempts"] = a.timing.provider_attempts;
  j["timing"]["failed_slots"] = a.timing.failed_slots;
  j["files"] = json::array();
  for (auto f : {artifact_files::config, artifact_files::records, artifact_files::trace, artifact_files::predictions,
                 artifact_files::per_label, artifact_files::summary}) {
    if (a.kind == ArtifactKind::imported && (f == artifact_files::records || f == artifact_files::trace)) continue;
    j["files"].push_back(f);
  }
  return j.dump(2) + "\n";
}

RunArtifact load_artifact(const std::filesystem::path& run_dir) {
  const auto manifest_path = run_dir / artifact_files::manifest;
  if (!std::filesystem::is_regular_file(manifest_path)) {
    throw ValidationError("incomplete artifact: " + manifest_path.string() + " is missing");
  }
  RunArtifact a;
  a.directory = run_dir;
  try {
    const auto j = json::parse(read_file(manifest_path));
    a.run_id = j.at("run_id").get<std::string>();
    a.kind = j.at("kind").get<std::string>() == "imported" ? ArtifactKind::imported : ArtifactKind::prompting;
    a.model = j.at("model").get<std::string>();
    a.strategy_label = j.at("strategy").get<std::string>();
    a.example_count = j.at("example_count").get<std::size_t>();
    a.metrics = metrics_from_json(j.at("metrics"));
    const auto& t = j.at("timing");
    a.timing.started_at = t.at("started_at").get<std::string>();
    a.timing.finished_at = t.at("finished_at").get<std::string>();
    a.timing.wall_ms = t.at("wall_ms").get<double>();
    a.timing.cache_hits = t.at("cache_hits").get<std::size_t>();
    a.timing.provider_attempts = t.at("provider_attempts").get<std::size_t>();
    a.timing.failed_slots = t.at("failed_slots").get<std::size_t>();
    for (const auto& f : j.at("files")) {
      if (!std::filesystem::exists(run_dir / f.get<std::string>())) {
        throw ValidationError("incomplete artifact: " + (run_dir / f.get<std::string>()).string() + " is missing");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError("incomplete artifact " + run_dir.string() + ": " + e.what());
  }
  if (a.kind == ArtifactKind::prompting) {
    const auto records = load_records(run_dir, a.metrics.schema);
    if (records.size() != a.metrics.n_examples) {
      throw ValidationError("incomplete artifact: " + std::to_string(records.size()) + " records for " +
                            std::to_string(a.metrics.n_examples) + " examples");
    }
  }
  a.config_snapshot = read_file(run_dir / artifact_files::config);
  return a;
}

std::string predictions_csv(const std::vector<std::string>& ids, const std::vector<LabelSet>& predictions,
                            const LabelSchema& schema) {
  if (ids.size() != predictions.size()) throw ValidationError("ids and predictions differ in length");
  std::vector<std::string> header{"id"};
  for (const auto& l : schema.labels()) header.push_back(l);
  std::string out = csv::format_row(header);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::vector<std::string> row{ids[i]};
    for (std::size_t k = 0; k < schema.size(); ++k) row.push_back(predictions[i].test(k) ? "1" : "0");
    out += csv::format_row(row);
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw RuntimeFailure("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw RuntimeFailure("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

}  // namespace emoharness
