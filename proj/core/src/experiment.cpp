#include "emoharness/experiment.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_map>

#include "emoharness/csv.hpp"
#include "emoharness/errors.hpp"
#include "emoharness/response_parser.hpp"

namespace emoharness {

namespace {

class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir) {
    const auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw RuntimeFailure("cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw ValidationError("another run is already writing to " + dir.string());
    }
  }
  ~DirectoryLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  int fd_ = -1;
};

// Temporary directory that is removed unless committed by renaming it.
class StagingDirectory {
 public:
  StagingDirectory(const std::filesystem::path& parent, const std::string& name)
      : path_(parent / ("." + name + ".partial-" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~StagingDirectory() {
    if (!committed_) {
      std::error_code ec;
      std::filesystem::remove_all(path_, ec);
    }
  }
  StagingDirectory(const StagingDirectory&) = delete;
  StagingDirectory& operator=(const StagingDirectory&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

  void commit(const std::filesystem::path& final_path) {
    std::error_code ec;
    std::filesystem::rename(path_, final_path, ec);
    if (ec) throw RuntimeFailure("cannot move artifact into " + final_path.string() + ": " + ec.message());
    committed_ = true;
  }

 private:
  std::filesystem::path path_;
  bool committed_ = false;
};

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

void write_metrics_files(const std::filesystem::path& dir, const MetricsReport& metrics) {
  write_text(dir / artifact_files::per_label, per_label_csv(metrics));
  write_text(dir / artifact_files::summary, summary_csv(metrics));
}

void ensure_fresh_target(const std::filesystem::path& final_path) {
  if (std::filesystem::exists(final_path)) {
    throw ValidationError("run id already used: " + final_path.string() + " exists");
  }
}

std::string model_label(const ProviderConfig& p) { return p.effective_model(); }

}  // namespace

RunArtifact run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto wall_start = std::chrono::steady_clock::now();

  const TemplateSet templates =
      config.templates_dir ? TemplateSet::from_directory(*config.templates_dir) : TemplateSet::builtin();
  const DatasetSplit eval = load_dataset(config.eval_path, config.schema);
  if (eval.empty()) throw ValidationError("eval split " + config.eval_path.string() + " has no examples");
  const LabelSchema& schema = eval.schema;

  std::vector<LabeledExample> shots;
  if (is_few_shot(config.strategy)) {
    const DatasetSplit train = load_dataset(config.train_path, schema);
    shots = select_examples(train, *config.selection);
  }

  std::vector<RenderedPrompt> prompts;
  prompts.reserve(eval.size());
  for (const auto& ex : eval.examples) {
    prompts.push_back(render_prompt(config.strategy, shots, ex.text, schema, templates, ex.id));
  }

  std::shared_ptr<CompletionProvider> provider = options.provider;
  if (!provider) provider = make_provider(config.provider);

  std::filesystem::create_directories(config.output_dir);
  DirectoryLock lock(config.output_dir);
  const auto final_path = config.output_dir / config.run_id;
  ensure_fresh_target(final_path);

  ResponseCache cache(config.cache_dir, config.provider.cache_namespace());
  for (const auto& p : prompts) {
    const auto key = cache_key(config.provider.effective_model(), p.content_hash, config.provider.temperature,
                               config.provider.max_output_tokens);
    if (!cache.lookup(key)) {
      provider->preflight();
      break;
    }
  }

  StagingDirectory staging(config.output_dir, config.run_id);
  write_text(staging.path() / artifact_files::config, config_snapshot(config));

  std::ofstream records_out(staging.path() / artifact_files::records, std::ios::binary);
  std::ofstream trace_out(staging.path() / artifact_files::trace, std::ios::binary);
  if (!records_out || !trace_out) throw RuntimeFailure("cannot create record files in " + staging.path().string());

  RunArtifact artifact;
  artifact.run_id = config.run_id;
  artifact.kind = ArtifactKind::prompting;
  artifact.model = model_label(config.provider);
  artifact.strategy_label = std::string(table_label(config.strategy));
  artifact.example_count = shots.size();
  artifact.timing.started_at = utc_timestamp();

  std::vector<std::optional<RunRecord>> records(eval.size());
  std::size_t flushed = 0;

  // Slots finish out of order; records are flushed as soon as the prefix
  // before them is complete so the file always reflects eval order.
  auto on_slot = [&](std::size_t i, const BatchSlot& slot) {
    RunRecord r;
    r.example_id = eval.examples[i].id;
    r.prompt_hash = prompts[i].content_hash;
    r.gold = eval.examples[i].gold;
    if (const auto* ok = std::get_if<CompletionResult>(&slot)) {
      r.raw_response = ok->raw_text;
      r.latency_ms = ok->latency_ms;
      r.from_cache = ok->from_cache;
      r.attempt_count = ok->attempt_count;
      auto parsed = parse_emotions(ok->raw_text, schema, config.parse_policy);
      r.status = parsed.status;
      r.unknown_tokens = std::move(parsed.unknown_tokens);
      r.predicted = std::move(parsed.labels);
    } else {
      const auto& err = std::get<CompletionError>(slot);
      r.status = ParseStatus::failed;
      r.predicted = LabelSet(schema.size());
      r.error = err.what();
      r.attempt_count = static_cast<int>(err.attempts().size());
    }
    records[i] = std::move(r);
    while (flushed < records.size() && records[flushed]) {
      records_out << record_line(*records[flushed], schema) << '\n';
      trace_out << trace_line(*records[flushed]) << '\n';
      ++flushed;
    }
    records_out.flush();
    trace_out.flush();
    if (options.progress) {
      *options.progress << "[" << i + 1 << "/" << records.size() << "] " << eval.examples[i].id << " "
                        << to_string(records[i]->status) << (records[i]->from_cache ? " (cached)" : "") << '\n';
    }
  };

  run_batch(prompts, config.provider, *provider, cache, config.concurrency_limit, options.dispatch, on_slot);
  records_out.close();
  trace_out.close();
  if (!records_out || !trace_out) throw RuntimeFailure("failed writing run records");

  std::vector<LabelSet> gold;
  std::vector<LabelSet> pred;
  std::vector<std::string> ids;
  std::size_t failures = 0;
  for (const auto& r : records) {
    gold.push_back(r->gold);
    pred.push_back(r->predicted);
    ids.push_back(r->example_id);
    if (r->status == ParseStatus::failed) ++failures;
    if (r->from_cache) ++artifact.timing.cache_hits;
    artifact.timing.provider_attempts += static_cast<std::size_t>(r->attempt_count);
    if (r->error) ++artifact.timing.failed_slots;
  }
  artifact.metrics = evaluate(gold, pred, schema, failures);

  write_text(staging.path() / artifact_files::predictions, predictions_csv(ids, pred, schema));
  write_metrics_files(staging.path(), artifact.metrics);
  artifact.timing.finished_at = utc_timestamp();
  artifact.timing.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall_start).count();
  write_text(staging.path() / artifact_files::manifest, artifact_manifest_json(artifact));

  staging.commit(final_path);
  artifact.directory = final_path;
  artifact.config_snapshot = read_file(final_path / artifact_files::config);
  return artifact;
}

MetricsReport score_predictions_text(const DatasetSplit& gold, std::string_view text) {
  std::vector<csv::Record> rows;
  try {
    rows = csv::parse(text);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("predictions: ") + e.what());
  }
  if (rows.empty()) throw ValidationError("predictions: file has no header");
  const auto& schema = gold.schema;
  const auto& header = rows.front().fields;

  std::vector<std::string> problems;
  std::optional<std::size_t> id_col;
  std::vector<std::optional<std::size_t>> label_cols(schema.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto folded = fold_case(header[c]);
    if (folded == "id") {
      id_col = c;
    } else if (auto k = schema.index_of(folded)) {
      label_cols[*k] = c;
    } else {
      problems.push_back("unexpected column '" + header[c] + "'");
    }
  }
  if (!id_col) problems.push_back("missing column 'id'");
  for (std::size_t k = 0; k < schema.size(); ++k) {
    if (!label_cols[k]) problems.push_back("missing label column '" + schema[k] + "'");
  }
  if (!problems.empty()) {
    std::string msg = "predictions header is invalid:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }

  std::unordered_map<std::string, std::size_t> gold_index;
  for (std::size_t i = 0; i < gold.size(); ++i) gold_index.emplace(gold.examples[i].id, i);

  std::vector<std::optional<LabelSet>> aligned(gold.size());
  std::vector<std::string> extra_ids;
  std::vector<std::string> duplicate_ids;
  std::vector<std::string> bad_cells;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != header.size()) {
      bad_cells.push_back("row " + std::to_string(r) + ": expected " + std::to_string(header.size()) + " fields");
      continue;
    }
    const std::string& id = f[*id_col];
    LabelSet set(schema.size());
    for (std::size_t k = 0; k < schema.size(); ++k) {
      const auto& cell = f[*label_cols[k]];
      if (cell == "1") {
        set.set(k);
      } else if (cell != "0") {
        bad_cells.push_back("id " + id + ", column " + schema[k] + ": '" + cell + "'");
      }
    }
    auto it = gold_index.find(id);
    if (it == gold_index.end()) {
      extra_ids.push_back(id);
    } else if (aligned[it->second]) {
      duplicate_ids.push_back(id);
    } else {
      aligned[it->second] = std::move(set);
    }
  }
  std::vector<std::string> missing_ids;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!aligned[i]) missing_ids.push_back(gold.examples[i].id);
  }

  if (!extra_ids.empty() || !duplicate_ids.empty() || !bad_cells.empty() || !missing_ids.empty()) {
    std::string msg = "predictions do not match the gold split:";
    auto list = [&](std::string_view title, const std::vector<std::string>& items) {
      if (items.empty()) return;
      msg += "\n  " + std::string(title) + " (" + std::to_string(items.size()) + "):";
      constexpr std::size_t kShown = 20;
      for (std::size_t i = 0; i < items.size() && i < kShown; ++i) msg += " " + items[i];
      if (items.size() > kShown) msg += " ... and " + std::to_string(items.size() - kShown) + " more";
    };
    list("missing ids", missing_ids);
    list("extra ids", extra_ids);
    list("duplicate ids", duplicate_ids);
    list("non-binary values", bad_cells);
    throw ValidationError(msg);
  }
  if (gold.empty()) throw ValidationError("gold split is empty; nothing to score");

  std::vector<LabelSet> golds;
  std::vector<LabelSet> preds;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    golds.push_back(gold.examples[i].gold);
    preds.push_back(*aligned[i]);
  }
  return evaluate(golds, preds, schema, 0);
}

MetricsReport score_predictions(const DatasetSplit& gold, const std::filesystem::path& predictions_path) {
  return score_predictions_text(gold, read_file(predictions_path));
}

RunArtifact import_predictions(const DatasetSplit& gold, const std::filesystem::path& predictions_path,
                               const std::filesystem::path& out_dir, std::string run_id, std::string model_label) {
  const auto started = utc_timestamp();
  const auto wall_start = std::chrono::steady_clock::now();
  const std::string text = read_file(predictions_path);
  const MetricsReport metrics = score_predictions_text(gold, text);

  const auto parent = out_dir.has_parent_path() ? out_dir.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(parent);
  ensure_fresh_target(out_dir);
  if (run_id.empty()) run_id = out_dir.filename().string();

  StagingDirectory staging(parent, out_dir.filename().string());
  nlohmann::ordered_json cfg;
  cfg["kind"] = "imported";
  cfg["run_id"] = run_id;
  cfg["model"] = model_label;
  cfg["predictions"] = std::filesystem::absolute(predictions_path).lexically_normal().string();
  cfg["schema"] = gold.schema.labels();
  cfg["n_examples"] = gold.size();
  write_text(staging.path() / artifact_files::config, cfg.dump(2) + "\n");

  // Re-emit the predictions in gold order with canonical columns.
  std::vector<std::string> ids;
  std::vector<LabelSet> preds;
  {
    const auto rows = csv::parse(text);
    std::unordered_map<std::string, LabelSet> by_id;
    const auto& header = rows.front().fields;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      LabelSet set(gold.schema.size());
      std::string id;
      for (std::size_t c = 0; c < header.size(); ++c) {
        const auto folded = fold_case(header[c]);
        if (folded == "id") {
          id = rows[r].fields[c];
        } else if (auto k = gold.schema.index_of(folded); k && rows[r].fields[c] == "1") {
          set.set(*k);
        }
      }
      by_id.emplace(std::move(id), std::move(set));
    }
    for (const auto& ex : gold.examples) {
      ids.push_back(ex.id);
      preds.push_back(by_id.at(ex.id));
    }
  }
  write_text(staging.path() / artifact_files::predictions, predictions_csv(ids, preds, gold.schema));
  write_metrics_files(staging.path(), metrics);

  RunArtifact artifact;
  artifact.run_id = std::move(run_id);
  artifact.kind = ArtifactKind::imported;
  artifact.model = std::move(model_label);
  artifact.strategy_label = "Imported";
  artifact.metrics = metrics;
  artifact.timing.started_at = started;
  artifact.timing.finished_at = utc_timestamp();
  artifact.timing.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall_start).count();
  write_text(staging.path() / artifact_files::manifest, artifact_manifest_json(artifact));
  staging.commit(out_dir);
  artifact.directory = out_dir;
  artifact.config_snapshot = read_file(out_dir / artifact_files::config);
  return artifact;
}

}  // namespace emoharness
