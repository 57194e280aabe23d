#include "emoharness/prompting.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <random>

#include "emoharness/digest.hpp"
#include "emoharness/errors.hpp"

namespace emoharness {

std::string_view to_string(PromptStrategy strategy) {
  switch (strategy) {
    case PromptStrategy::zero_shot: return "zero_shot";
    case PromptStrategy::zero_shot_cot: return "zero_shot_cot";
    case PromptStrategy::few_shot: return "few_shot";
    case PromptStrategy::few_shot_cot: return "few_shot_cot";
    case PromptStrategy::few_shot_tot: return "few_shot_tot";
  }
  return "zero_shot";
}

PromptStrategy parse_strategy(std::string_view name) {
  for (PromptStrategy s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  throw ValidationError("unknown prompt strategy: " + std::string(name));
}

bool is_few_shot(PromptStrategy strategy) noexcept {
  return strategy == PromptStrategy::few_shot || strategy == PromptStrategy::few_shot_cot ||
         strategy == PromptStrategy::few_shot_tot;
}

std::string_view table_label(PromptStrategy strategy) {
  switch (strategy) {
    case PromptStrategy::zero_shot: return "Zero-Shot";
    case PromptStrategy::zero_shot_cot: return "Z-S CoT";
    case PromptStrategy::few_shot: return "Few-Shot";
    case PromptStrategy::few_shot_cot: return "F-S CoT";
    case PromptStrategy::few_shot_tot: return "F-S ToT";
  }
  return "";
}

std::string_view to_string(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::per_emotion_coverage: return "per_emotion_coverage";
    case SelectionMethod::first_k: return "first_k";
    case SelectionMethod::seeded_random: return "seeded_random";
  }
  return "first_k";
}

ExampleSelection::ExampleSelection(SelectionMethod method, std::size_t count, std::uint64_t seed)
    : method_(method), count_(count), seed_(seed) {
  if (count_ == 0) throw ValidationError("example selection count must be positive");
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

// Uniform draw in [0, bound) by rejection: discard raw outputs from the
// incomplete top range of the 64-bit engine.
std::uint64_t bounded_draw(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t x = engine();
    if (x < limit) return x % bound;
  }
}

}  // namespace

ExampleSelection ExampleSelection::parse(std::string_view spec, std::uint64_t default_seed) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw ValidationError("selection must be method:count[:seed], got '" + std::string(spec) + "'");
  }
  SelectionMethod method;
  if (parts[0] == "per_emotion_coverage") {
    method = SelectionMethod::per_emotion_coverage;
  } else if (parts[0] == "first_k") {
    method = SelectionMethod::first_k;
  } else if (parts[0] == "seeded_random") {
    method = SelectionMethod::seeded_random;
  } else {
    throw ValidationError("unknown selection method: " + std::string(parts[0]));
  }
  const auto count = parse_number<std::size_t>(parts[1], "selection count");
  const auto seed = parts.size() == 3 ? parse_number<std::uint64_t>(parts[2], "selection seed") : default_seed;
  return ExampleSelection(method, count, seed);
}

std::string ExampleSelection::to_spec() const {
  return std::string(to_string(method_)) + ':' + std::to_string(count_) + ':' + std::to_string(seed_);
}

std::vector<LabeledExample> select_examples(const DatasetSplit& train, const ExampleSelection& selection) {
  if (train.empty()) throw ValidationError("cannot select examples from an empty split");
  const std::size_t n = train.size();
  const std::size_t k = selection.count();
  if (k > n) {
    throw ValidationError("selection count " + std::to_string(k) + " exceeds split size " + std::to_string(n));
  }

  std::vector<std::size_t> picked;
  switch (selection.method()) {
    case SelectionMethod::first_k: {
      picked.resize(k);
      std::iota(picked.begin(), picked.end(), std::size_t{0});
      break;
    }
    case SelectionMethod::seeded_random: {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::mt19937_64 engine(selection.seed());
      for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(bounded_draw(engine, n - i));
        std::swap(order[i], order[j]);
      }
      picked.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
    case SelectionMethod::per_emotion_coverage: {
      const auto& schema = train.schema;
      if (k < schema.size()) {
        throw ValidationError("per_emotion_coverage needs at least one slot per label (" +
                              std::to_string(schema.size()) + "), got " + std::to_string(k));
      }
      std::vector<bool> used(n, false);
      for (std::size_t label = 0; label < schema.size(); ++label) {
        bool occurs = false;
        std::optional<std::size_t> earliest_unused;
        for (std::size_t i = 0; i < n; ++i) {
          if (!train.examples[i].gold.test(label)) continue;
          occurs = true;
          if (!used[i]) {
            earliest_unused = i;
            break;
          }
        }
        if (!occurs) throw ValidationError("per_emotion_coverage: label '" + schema[label] + "' never occurs in train");
        // No unused carrier left means an earlier pick already covers the label.
        if (earliest_unused) {
          used[*earliest_unused] = true;
          picked.push_back(*earliest_unused);
        }
      }
      for (std::size_t i = 0; i < n && picked.size() < k; ++i) {
        if (!used[i]) {
          used[i] = true;
          picked.push_back(i);
        }
      }
      std::sort(picked.begin(), picked.end());
      break;
    }
  }

  std::vector<LabeledExample> out;
  out.reserve(picked.size());
  for (auto i : picked) out.push_back(train.examples[i]);
  return out;
}

std::string format_example(const LabeledExample& example, const LabelSchema& schema) {
  return "Sentence: \"" + example.text + "\"\nEmotions: " + format_label_list(example.gold, schema);
}

std::string format_example_block(const std::vector<LabeledExample>& examples, const LabelSchema& schema) {
  std::string out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (i) out += '\n';
    const std::string formatted = format_example(examples[i], schema);
    const auto nl = formatted.find('\n');
    out += std::to_string(i + 1) + ". " + formatted.substr(0, nl) + "\n    " + formatted.substr(nl + 1);
  }
  return out;
}

RenderedPrompt render_prompt(PromptStrategy strategy, const std::vector<LabeledExample>& examples,
                             std::string_view sentence, const LabelSchema& schema, const TemplateSet& templates,
                             std::string target_id) {
  if (sentence.empty()) throw ValidationError("cannot render a prompt for an empty sentence");
  if (schema.empty()) throw ValidationError("cannot render a prompt with an empty schema");
  if (is_few_shot(strategy) && examples.empty()) {
    throw ValidationError(std::string(to_string(strategy)) + " requires at least one example");
  }
  if (!is_few_shot(strategy) && !examples.empty()) {
    throw ValidationError(std::string(to_string(strategy)) + " does not take examples");
  }

  const std::string& tmpl = templates.text(strategy);
  const std::string labels = schema.quoted_display_list();
  const std::string block = examples.empty() ? std::string{} : format_example_block(examples, schema);

  // Single left-to-right pass so substituted text is never rescanned.
  RenderedPrompt prompt;
  std::string& out = prompt.text;
  out.reserve(tmpl.size() + block.size() + sentence.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string::npos) {
      out.append(tmpl, pos);
      break;
    }
    out.append(tmpl, pos, open - pos);
    const auto close = tmpl.find("}}", open + 2);
    const std::string_view name = close == std::string::npos
                                      ? std::string_view{}
                                      : std::string_view(tmpl).substr(open + 2, close - open - 2);
    if (name == "SENTENCE") {
      out += sentence;
    } else if (name == "EXAMPLES") {
      out += block;
    } else if (name == "LABELS") {
      out += labels;
    } else {
      out += "{{";
      pos = open + 2;
      continue;
    }
    pos = close + 2;
  }

  prompt.strategy = strategy;
  prompt.target_id = std::move(target_id);
  for (const auto& ex : examples) prompt.example_ids.push_back(ex.id);
  prompt.content_hash = sha256_hex(prompt.text);
  return prompt;
}

std::optional<std::string> extract_target_sentence(std::string_view text) {
  constexpr std::string_view kCue = "Sentence:";
  std::size_t found = std::string_view::npos;
  if (text.starts_with(kCue)) found = 0;
  for (std::size_t pos = text.find("\nSentence:"); pos != std::string_view::npos;
       pos = text.find("\nSentence:", pos + 1)) {
    found = pos + 1;
  }
  if (found == std::string_view::npos) return std::nullopt;

  std::size_t begin = found + kCue.size();
  while (begin < text.size() && text[begin] == ' ') ++begin;
  std::size_t end = std::string_view::npos;
  for (std::string_view terminator : {"\n\nReasoning:", "\n\nEmotions:"}) {
    end = std::min(end, text.find(terminator, begin));
  }
  if (end == std::string_view::npos) end = text.find("\n\n", begin);
  if (end == std::string_view::npos) end = text.size();
  return std::string(text.substr(begin, end - begin));
}

}  // namespace emoharness
