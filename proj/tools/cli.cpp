#include "cli.hpp"

#include <CLI11.hpp>
#include <sstream>

#include "emoharness/dataset.hpp"
#include "emoharness/experiment.hpp"
#include "emoharness/report.hpp"

namespace emoharness::cli {

namespace {

void print_metrics(std::ostream& out, const MetricsReport& m) {
  out << summary_csv(m) << '\n' << per_label_csv(m);
}

std::optional<LabelSchema> schema_from_list(const std::string& list) {
  if (list.empty()) return std::nullopt;
  std::vector<std::string> names;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) names.push_back(item);
  return LabelSchema(std::move(names));
}

std::filesystem::path normalized_dir(const std::string& p) {
  auto path = std::filesystem::path(p).lexically_normal();
  if (path.filename().empty()) path = path.parent_path();
  return path;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prompting and evaluation harness for multi-label emotion detection", "emoharness"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load and validate a dataset CSV");
  std::string ingest_path;
  bool with_stats = false;
  std::size_t bucket_width = 5;
  std::optional<std::size_t> expect;
  std::string ingest_schema;
  std::string stats_out;
  ingest->add_option("csv", ingest_path, "Dataset CSV (id, text, one 0/1 column per label)")->required();
  ingest->add_flag("--stats", with_stats, "Emit a token-length histogram (bucket_start,bucket_end,count)");
  ingest->add_option("--bucket-width", bucket_width, "Histogram bucket width in tokens")->check(CLI::PositiveNumber);
  ingest->add_option("--expect", expect, "Expected number of examples");
  ingest->add_option("--schema", ingest_schema, "Comma-separated label list (default: inferred from header)");
  ingest->add_option("--stats-out", stats_out, "Write the histogram CSV here instead of stdout");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a prompting experiment from a config file");
  std::string config_path;
  bool quiet = false;
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_flag("-q,--quiet", quiet, "Do not print per-example progress");

  // score
  auto* score = app.add_subcommand("score", "Score a prediction CSV against gold labels");
  std::string gold_path;
  std::string pred_path;
  std::string score_out;
  std::string score_model = "imported";
  score->add_option("--gold", gold_path, "Gold dataset CSV")->required();
  score->add_option("--pred", pred_path, "Prediction CSV (id + one 0/1 column per label)")->required();
  score->add_option("--out", score_out, "Store the scored predictions as a run directory");
  score->add_option("--model", score_model, "Model label recorded with --out");

  // report
  auto* report = app.add_subcommand("report", "Emit summary and confusion tables for a run");
  std::string report_dir;
  std::string report_format = "markdown";
  std::string report_out;
  report->add_option("run_dir", report_dir, "Run directory")->required();
  report->add_option("--format", report_format, "markdown or csv")->check(CLI::IsMember({"markdown", "csv"}));
  report->add_option("--out", report_out, "Output directory (default: <run-dir>/report)");

  // compare
  auto* compare = app.add_subcommand("compare", "Per-emotion F1 comparison of two runs");
  std::string dir_a;
  std::string dir_b;
  std::string compare_format = "markdown";
  compare->add_option("run_dir_a", dir_a, "First run directory")->required();
  compare->add_option("run_dir_b", dir_b, "Second run directory")->required();
  compare->add_option("--format", compare_format, "markdown or csv")->check(CLI::IsMember({"markdown", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*ingest) {
      const auto split = load_dataset(ingest_path, schema_from_list(ingest_schema));
      out << "split: " << to_string(split.name) << "\nexamples: " << split.size() << "\nlabels:";
      for (const auto& l : split.schema.labels()) out << ' ' << l;
      out << '\n';
      int code = kExitOk;
      if (expect) {
        const auto r = validate_against_expected(split, *expect);
        out << r.summary << '\n';
        if (!r.passed) code = kExitValidation;
      }
      if (with_stats) {
        const auto csv = histogram_to_csv(dataset_stats(split, bucket_width));
        if (stats_out.empty()) {
          out << csv;
        } else {
          write_file_atomic(stats_out, csv);
          out << "stats written to " << stats_out << '\n';
        }
      }
      return code;
    }
    if (*run_cmd) {
      const auto config = load_config(config_path);
      RunOptions options;
      if (!quiet) options.progress = &err;
      const auto artifact = run_experiment(config, options);
      out << "run " << artifact.run_id << " written to " << artifact.directory.string() << '\n';
      out << "f1_macro " << artifact.metrics.f1_macro << "  f1_micro " << artifact.metrics.f1_micro
          << "  examples " << artifact.metrics.n_examples << "  parse failures "
          << artifact.metrics.parse_failure_count << "  cache hits " << artifact.timing.cache_hits << '\n';
      return artifact.timing.failed_slots > 0 ? kExitRuntime : kExitOk;
    }
    if (*score) {
      const auto gold = load_dataset(gold_path);
      if (score_out.empty()) {
        print_metrics(out, score_predictions(gold, pred_path));
      } else {
        const auto out_dir = normalized_dir(score_out);
        const auto artifact = import_predictions(gold, pred_path, out_dir, out_dir.filename().string(), score_model);
        print_metrics(out, artifact.metrics);
        out << "artifact written to " << artifact.directory.string() << '\n';
      }
      return kExitOk;
    }
    if (*report) {
      const auto dir = normalized_dir(report_dir);
      const auto artifact = load_artifact(dir);
      const auto format = parse_report_format(report_format);
      const auto target = report_out.empty() ? dir / "report" : std::filesystem::path(report_out);
      const auto files = emit_report(artifact, format, target);
      if (format == ReportFormat::markdown) out << render_markdown_report(artifact);
      for (const auto& f : files) err << "wrote " << f.string() << '\n';
      return kExitOk;
    }
    if (*compare) {
      const auto a = load_artifact(normalized_dir(dir_a));
      const auto b = load_artifact(normalized_dir(dir_b));
      out << render_comparison(a, b, compare_artifacts(a, b), parse_report_format(compare_format));
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace emoharness::cli
