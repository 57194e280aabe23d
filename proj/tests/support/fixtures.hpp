#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emoharness/config.hpp"
#include "emoharness/dataset.hpp"

namespace emoharness::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path test_data(std::string_view relative);
std::string slurp(const std::filesystem::path& path);
void spit(const std::filesystem::path& path, std::string_view contents);

/// English five-label split whose texts contain exactly the mock-lexicon
/// triggers of their gold labels, so the mock provider answers perfectly.
/// Gold sets cycle through all 32 subsets starting at `first_subset`.
DatasetSplit lexicon_split(std::size_t n, std::string_view id_prefix = "ex", std::uint32_t first_subset = 0,
                           SplitName name = SplitName::dev);

/// Synthetic train split of `n` examples with pseudo-random gold labels and
/// varied text, every label occurring at least once when n >= 5.
DatasetSplit synthetic_train(std::size_t n, std::uint64_t seed = 1);

/// Mock-provider config rooted at `root`: eval at root/eval.csv, train at
/// root/train.csv, cache in root/cache and runs in root/runs.
ExperimentConfig mock_config(const std::filesystem::path& root, std::string run_id,
                             PromptStrategy strategy = PromptStrategy::zero_shot,
                             std::optional<ExampleSelection> selection = std::nullopt);

}  // namespace emoharness::testing
