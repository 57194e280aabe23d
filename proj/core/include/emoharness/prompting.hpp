#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emoharness/dataset.hpp"
#include "emoharness/labels.hpp"

namespace emoharness {

enum class PromptStrategy { zero_shot, zero_shot_cot, few_shot, few_shot_cot, few_shot_tot };

inline constexpr PromptStrategy kAllStrategies[] = {PromptStrategy::zero_shot, PromptStrategy::zero_shot_cot,
                                                    PromptStrategy::few_shot, PromptStrategy::few_shot_cot,
                                                    PromptStrategy::few_shot_tot};

std::string_view to_string(PromptStrategy strategy);
/// Throws ValidationError for unknown names.
PromptStrategy parse_strategy(std::string_view name);
bool is_few_shot(PromptStrategy strategy) noexcept;
/// Short label used in summary tables ("Few-Shot", "Z-S CoT", ...).
std::string_view table_label(PromptStrategy strategy);

/// Template text per strategy. Placeholders: {{LABELS}}, {{EXAMPLES}}, {{SENTENCE}}.
class TemplateSet {
 public:
  /// The templates compiled into the library.
  static const TemplateSet& builtin();
  /// Reads `<strategy>.txt` for every strategy from `dir`; missing files fall
  /// back to the built-in text.
  static TemplateSet from_directory(const std::filesystem::path& dir);

  const std::string& text(PromptStrategy strategy) const;
  void set(PromptStrategy strategy, std::string text);

 private:
  std::map<PromptStrategy, std::string> texts_;
};

enum class SelectionMethod { per_emotion_coverage, first_k, seeded_random };

std::string_view to_string(SelectionMethod method);

class ExampleSelection {
 public:
  /// Throws ValidationError when count is 0.
  ExampleSelection(SelectionMethod method, std::size_t count, std::uint64_t seed = 0);

  /// Parses `method:count[:seed]`; `default_seed` fills an omitted seed.
  static ExampleSelection parse(std::string_view spec, std::uint64_t default_seed = 0);
  std::string to_spec() const;

  SelectionMethod method() const noexcept { return method_; }
  std::size_t count() const noexcept { return count_; }
  std::uint64_t seed() const noexcept { return seed_; }

  friend bool operator==(const ExampleSelection&, const ExampleSelection&) = default;

 private:
  SelectionMethod method_;
  std::size_t count_;
  std::uint64_t seed_;
};

/// Deterministic in-context example selection.
///
/// per_emotion_coverage: for each schema label in order, takes the earliest
/// unselected example carrying that label, then fills the remaining slots with
/// the earliest unused examples. Requires count >= schema size.
///
/// seeded_random: std::mt19937_64 seeded with `seed`, partial Fisher-Yates over
/// example indices with bounded draws by rejection sampling, returned in draw
/// order. Both the engine and the draw procedure are fully specified, so the
/// result replays across platforms.
std::vector<LabeledExample> select_examples(const DatasetSplit& train, const ExampleSelection& selection);

struct RenderedPrompt {
  std::string text;
  PromptStrategy strategy = PromptStrategy::zero_shot;
  std::vector<std::string> example_ids;
  std::string target_id;
  std::string content_hash;  // sha256 of text
};

/// Two lines: `Sentence: "<text>"` and `Emotions: <labels>`.
std::string format_example(const LabeledExample& example, const LabelSchema& schema);

/// Numbered example block inserted at {{EXAMPLES}}.
std::string format_example_block(const std::vector<LabeledExample>& examples, const LabelSchema& schema);

/// Pure substitution into the strategy template. Throws ValidationError when
/// the sentence or schema is empty, or the example list does not match the
/// strategy (few-shot needs >= 1, zero-shot needs 0).
RenderedPrompt render_prompt(PromptStrategy strategy, const std::vector<LabeledExample>& examples,
                             std::string_view sentence, const LabelSchema& schema,
                             const TemplateSet& templates = TemplateSet::builtin(), std::string target_id = {});

/// Text of the last `Sentence:` block of a rendered prompt (up to the next blank line).
std::optional<std::string> extract_target_sentence(std::string_view prompt_text);

}  // namespace emoharness
