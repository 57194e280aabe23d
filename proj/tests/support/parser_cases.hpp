#pragma once

// Hand-written model outputs with the label set and status each must yield
// over the English five-label schema.

#include <string_view>
#include <vector>

namespace emoharness::testing {

struct ParserCase {
  std::string_view name;
  std::string_view raw;
  bool strict;
  std::vector<std::string_view> labels;
  std::string_view status;  // clean | recovered | failed
};

inline const std::vector<ParserCase>& parser_cases() {
  static const std::vector<ParserCase> cases = {
      {"plain cue line", "Emotions: Anger, Fear", true, {"anger", "fear"}, "clean"},
      {"none", "Emotions: None", true, {}, "clean"},
      {"none lowercase with period", "emotions: none.", true, {}, "clean"},
      {"lowercase labels", "Emotions: joy, sadness", true, {"joy", "sadness"}, "clean"},
      {"uppercase labels", "EMOTIONS: SURPRISE", true, {"surprise"}, "clean"},
      {"no space after comma", "Emotions: Anger,Fear", true, {"anger", "fear"}, "clean"},
      {"trailing period", "Emotions: Joy.", true, {"joy"}, "clean"},
      {"quoted tokens", "Emotions: \"Fear\", 'Sadness'", true, {"fear", "sadness"}, "clean"},
      {"backticks", "Emotions: `Joy`", true, {"joy"}, "clean"},
      {"duplicate label", "Emotions: Joy, joy", true, {"joy"}, "clean"},
      {"trailing comma", "Emotions: Anger, Fear,", true, {"anger", "fear"}, "clean"},
      {"crlf endings", "Reasoning: tense.\r\nEmotions: Fear\r\n", true, {"fear"}, "clean"},
      {"reasoning before cue", "Reasoning: the speaker lost a friend.\n\nEmotions: Sadness", true, {"sadness"},
       "clean"},
      {"last cue line wins", "Emotions: Joy\nOn reflection...\nEmotions: Fear", true, {"fear"}, "clean"},
      {"final cue beats later plain cue",
       "Thought 5: settle.\nFinal Emotions: Anger, Surprise\nEmotions: Joy", true, {"anger", "surprise"}, "clean"},
      {"tree of thought output",
       "Thought 1: cancelled show\nThought 2: disbelief\nThought 3: upset\nThought 4: no fear\nThought 5: done\n"
       "Final Emotions: Anger, Surprise",
       true, {"anger", "surprise"}, "clean"},
      {"cue with payload on next line", "Emotions:\n\n  Joy, Surprise  \n", true, {"joy", "surprise"}, "clean"},
      {"bare list without cue", "Anger, Sadness", true, {"anger", "sadness"}, "clean"},
      {"bare list after prose", "I think the answer is:\nFear", true, {"fear"}, "clean"},
      {"indented cue", "   Emotions:   Anger  ", true, {"anger"}, "clean"},
      {"unknown with punctuation lenient", "Emotions: Anger, Disgust?", false, {"anger"}, "recovered"},
      {"unknown token strict", "Emotions: Anger, Disgust", true, {}, "failed"},
      {"unknown token lenient", "Emotions: Anger, Disgust", false, {"anger"}, "recovered"},
      {"only unknown lenient", "Emotions: Love", false, {}, "failed"},
      {"only unknown strict", "Emotions: Love, Trust", true, {}, "failed"},
      {"empty output", "", false, {}, "failed"},
      {"whitespace output", "  \n\t\n", false, {}, "failed"},
      {"empty cue payload at end", "Emotions:", false, {}, "failed"},
      {"prose only", "The sentence is hard to classify", false, {}, "failed"},
      {"none mixed with a label strict", "Emotions: None, Joy", true, {}, "failed"},
      {"none mixed with a label lenient", "Emotions: None, Joy", false, {"joy"}, "recovered"},
  };
  return cases;
}

}  // namespace emoharness::testing
