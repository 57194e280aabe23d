#include <fstream>
#include <sstream>

#include "emoharness/errors.hpp"
#include "emoharness/prompting.hpp"

namespace emoharness {

namespace {

// Instruction texts for each strategy. Kept identical to templates/*.txt, which
// ship as editable copies (minus the final newline).

constexpr const char* kZeroShot = R"tmpl(Analyze the following sentence and identify all emotions that are present. Select from this list: {{LABELS}}. If multiple emotions are present, list them separated by commas. If no emotions from the list are present, respond with "None".

Sentence: {{SENTENCE}}

Emotions:)tmpl";

constexpr const char* kZeroShotCot = R"tmpl(Analyze the following sentence and identify all emotions that are present. Select from this list: {{LABELS}}. If multiple emotions are present, list them separated by commas. If no emotions from the list are present, respond with "None". Let's break down the emotional content step by step.

Sentence: {{SENTENCE}}

Reasoning: Consider the specific words used, the context of the sentence, and any implied feelings.

Emotions:)tmpl";

constexpr const char* kFewShot = R"tmpl(Analyze the following sentence and identify all emotions that are present.

Examples:
{{EXAMPLES}}

Given the following sentence, select from this list: {{LABELS}}. If multiple emotions are present, list them separated by commas. If no emotions from the list are present, respond with "None".

Sentence: {{SENTENCE}}

Emotions:)tmpl";

constexpr const char* kFewShotCot = R"tmpl(Analyze the following sentence and identify all emotions that are present.

Examples:
{{EXAMPLES}}

Given the following sentence, select from this list: {{LABELS}}. If multiple emotions are present, list them separated by commas. Let's break down the emotional content step by step.

Sentence: {{SENTENCE}}

Reasoning: Consider the specific words used, the context of the sentence, and any implied feelings. Output only the emotions that are present. No other words.

Emotions:)tmpl";

constexpr const char* kFewShotTot = R"tmpl(Analyze the following sentence and identify all emotions that are present. Given the following sentence, select from this list: {{LABELS}}.

Examples:
{{EXAMPLES}}

Given the following sentence, select from this list: {{LABELS}}. If multiple emotions are present, list them separated by commas. Let's break down the emotional content step by step using a Tree of Thoughts approach.

Sentence: {{SENTENCE}}

Reasoning:

Thought 1: Initial Impression: What is the first emotion that comes to mind upon reading the sentence? Briefly explain why.

Thought 2: Word-Level Analysis: Are there any specific words or phrases that strongly suggest an emotion? If so, which words and which emotions?

Thought 3: Contextual Considerations: Does the context of the sentence provide any additional clues about the emotional state? Consider the situation being described.

Thought 4: Alternative Interpretations: Are there any other possible interpretations of the sentence that might suggest different emotions? Explore these possibilities.

Thought 5: Synthesis: Based on the previous thoughts, which emotions are most likely present in the sentence? Justify your final selection.

Final Emotions: Output only the emotions that are present, separated by commas. No other words.

Emotions:)tmpl";

}  // namespace

const TemplateSet& TemplateSet::builtin() {
  static const TemplateSet set = [] {
    TemplateSet s;
    s.texts_[PromptStrategy::zero_shot] = kZeroShot;
    s.texts_[PromptStrategy::zero_shot_cot] = kZeroShotCot;
    s.texts_[PromptStrategy::few_shot] = kFewShot;
    s.texts_[PromptStrategy::few_shot_cot] = kFewShotCot;
    s.texts_[PromptStrategy::few_shot_tot] = kFewShotTot;
    return s;
  }();
  return set;
}

TemplateSet TemplateSet::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ValidationError("template directory not found: " + dir.string());
  }
  TemplateSet set = builtin();
  for (PromptStrategy strategy : kAllStrategies) {
    const auto path = dir / (std::string(to_string(strategy)) + ".txt");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read template: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.ends_with("\r\n")) {
      text.resize(text.size() - 2);
    } else if (text.ends_with('\n')) {
      text.pop_back();
    }
    if (text.find("{{SENTENCE}}") == std::string::npos) {
      throw ValidationError("template has no {{SENTENCE}} placeholder: " + path.string());
    }
    set.texts_[strategy] = std::move(text);
  }
  return set;
}

const std::string& TemplateSet::text(PromptStrategy strategy) const { return texts_.at(strategy); }

void TemplateSet::set(PromptStrategy strategy, std::string text) { texts_[strategy] = std::move(text); }

}  // namespace emoharness
