#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "emoharness/labels.hpp"
#include "emoharness/prompting.hpp"
#include "emoharness/providers.hpp"
#include "emoharness/response_parser.hpp"

namespace emoharness {

/// One experiment of the prompting grid. Stored on disk as JSON:
///
///   {
///     "run_id": "gpt-4o-fs-600",
///     "seed": 0,
///     "data": {"train": "eng_train.csv", "eval": "eng_dev.csv", "schema": ["anger", ...]},
///     "prompt": {"strategy": "few_shot", "selection": "seeded_random:600:7", "templates_dir": "..."},
///     "provider": {"kind": "http_chat", "endpoint": "...", "model_name": "...",
///                  "auth_env_var": "API_KEY", "temperature": 0, "max_output_tokens": 256,
///                  "request_timeout": 60, "max_retries": 4, "base_backoff": 1.0},
///     "parse_policy": "lenient",
///     "concurrency_limit": 4,
///     "cache_dir": "cache",
///     "output_dir": "runs"
///   }
///
/// Relative paths resolve against the config file's directory.
struct ExperimentConfig {
  std::string run_id;
  std::uint64_t seed = 0;

  std::filesystem::path train_path;  // required for few-shot strategies
  std::filesystem::path eval_path;
  std::optional<LabelSchema> schema;

  PromptStrategy strategy = PromptStrategy::zero_shot;
  std::optional<ExampleSelection> selection;
  std::optional<std::filesystem::path> templates_dir;

  ProviderConfig provider;
  ParsePolicy parse_policy = ParsePolicy::lenient;
  std::size_t concurrency_limit = 4;

  std::filesystem::path cache_dir = "cache";
  std::filesystem::path output_dir = "runs";

  /// Throws ValidationError on any invariant violation.
  void validate() const;
};

/// Throws ValidationError on malformed JSON, unknown keys or bad values.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved JSON (defaults included, paths absolute). Contains the name
/// of the auth variable, never its value.
std::string config_snapshot(const ExperimentConfig& config);

}  // namespace emoharness
