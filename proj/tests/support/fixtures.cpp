#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace emoharness::testing {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("emoharness-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path test_data(std::string_view relative) { return std::filesystem::path(EMOHARNESS_TEST_DATA) / relative; }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

DatasetSplit lexicon_split(std::size_t n, std::string_view id_prefix, std::uint32_t first_subset, SplitName name) {
  // One trigger per label, in English schema order.
  static const char* kTriggers[5][2] = {
      {"furious", "angry"}, {"terrified", "afraid"}, {"delighted", "happy"}, {"grieving", "sad"}, {"astonished", "shocked"}};
  static const char* kFillers[] = {"the meeting ran late", "my neighbour called", "we took the train home",
                                   "the report was finished", "it rained all afternoon"};
  DatasetSplit split;
  split.name = name;
  split.schema = LabelSchema::english();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t subset = static_cast<std::uint32_t>((first_subset + i) % 32);
    LabeledExample ex;
    ex.id = std::string(id_prefix) + "-" + std::to_string(i);
    ex.gold = LabelSet(5);
    std::string text = std::string("Today ") + kFillers[i % 5];
    for (std::size_t k = 0; k < 5; ++k) {
      if (subset & (1u << k)) {
        ex.gold.set(k);
        text += std::string(" and I felt ") + kTriggers[k][i % 2];
      }
    }
    text += ".";
    ex.text = std::move(text);
    split.examples.push_back(std::move(ex));
  }
  return split;
}

DatasetSplit synthetic_train(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  static const char* kWords[] = {"sun", "river", "letter", "market", "storm", "garden", "ticket", "window", "song"};
  DatasetSplit split;
  split.schema = LabelSchema::english();
  for (std::size_t i = 0; i < n; ++i) {
    LabeledExample ex;
    ex.id = "tr-" + std::to_string(i);
    ex.gold = LabelSet(5);
    if (i < 5) {
      ex.gold.set(i);
    } else {
      for (std::size_t k = 0; k < 5; ++k) ex.gold.set(k, (rng() % 3) == 0);
    }
    const std::size_t len = 3 + rng() % 12;
    std::string text;
    for (std::size_t w = 0; w < len; ++w) {
      if (w) text += ' ';
      text += kWords[rng() % 9];
    }
    ex.text = text + " " + std::to_string(i) + ".";
    split.examples.push_back(std::move(ex));
  }
  return split;
}

ExperimentConfig mock_config(const std::filesystem::path& root, std::string run_id, PromptStrategy strategy,
                             std::optional<ExampleSelection> selection) {
  ExperimentConfig cfg;
  cfg.run_id = std::move(run_id);
  cfg.eval_path = root / "eval.csv";
  cfg.train_path = root / "train.csv";
  cfg.strategy = strategy;
  cfg.selection = std::move(selection);
  cfg.provider.kind = ProviderKind::mock_lexicon;
  cfg.cache_dir = root / "cache";
  cfg.output_dir = root / "runs";
  return cfg;
}

}  // namespace emoharness::testing
