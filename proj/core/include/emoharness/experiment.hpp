#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

#include "emoharness/artifact.hpp"
#include "emoharness/config.hpp"
#include "emoharness/dataset.hpp"
#include "emoharness/llm_client.hpp"
#include "emoharness/metrics.hpp"

namespace emoharness {

struct RunOptions {
  /// Overrides the provider built from the config (tests, instrumentation).
  std::shared_ptr<CompletionProvider> provider;
  DispatchOptions dispatch;
  /// One line per finished slot when set.
  std::ostream* progress = nullptr;
};

/// Selects examples, renders one prompt per eval example, dispatches, parses,
/// scores and writes the artifact under `output_dir/run_id`. The artifact is
/// assembled in a temporary sibling directory and renamed into place, so an
/// interrupted run never leaves a partial artifact at the final path. Holds an
/// exclusive lock on `output_dir/.lock` for the duration.
///
/// Config problems throw ValidationError before any provider call.
/// Provider failures do not abort the run: the slot is scored as an empty
/// prediction with status failed.
RunArtifact run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Scores an `id` + per-label prediction CSV against the gold split. Throws
/// ValidationError listing every missing id, extra id, duplicate id, missing
/// label column and non-binary cell.
MetricsReport score_predictions(const DatasetSplit& gold, const std::filesystem::path& predictions_path);
MetricsReport score_predictions_text(const DatasetSplit& gold, std::string_view predictions_csv_text);

/// Scores externally produced predictions and stores them as an artifact at
/// `out_dir` so they can be reported and compared like a prompting run.
RunArtifact import_predictions(const DatasetSplit& gold, const std::filesystem::path& predictions_path,
                               const std::filesystem::path& out_dir, std::string run_id, std::string model_label);

}  // namespace emoharness
