#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace emoharness {

struct CacheEntry {
  std::string key;
  std::string raw_text;
  std::map<std::string, std::string> meta;
  std::string created_at;  // ISO-8601 UTC
};

/// Digest of (model_name, prompt content hash, temperature, max output tokens).
/// Temperature is encoded with the shortest round-trip decimal form.
std::string cache_key(std::string_view model_name, std::string_view prompt_hash, double temperature,
                      int max_output_tokens);

/// Append-only JSONL store with an in-memory index. Lookups may run
/// concurrently; appends are serialized and flushed line by line. A torn or
/// unparsable line (e.g. from a crash mid-write) is skipped on load. When a key
/// occurs more than once the first entry wins.
class ResponseCache {
 public:
  /// Opens (creating if needed) `<dir>/<namespace>.jsonl`.
  ResponseCache(const std::filesystem::path& dir, std::string_view name_space);
  /// In-memory only; nothing is persisted.
  ResponseCache();

  ResponseCache(const ResponseCache&) = delete;
  ResponseCache& operator=(const ResponseCache&) = delete;

  std::optional<CacheEntry> lookup(const std::string& key) const;
  /// Persists and indexes the entry. Existing keys are left untouched.
  void insert(CacheEntry entry);

  std::size_t size() const;
  std::size_t skipped_lines() const noexcept { return skipped_lines_; }
  const std::filesystem::path& path() const noexcept { return path_; }

  /// "http_chat__gpt-4o" style file stem with unsafe characters replaced.
  static std::string sanitize_namespace(std::string_view name_space);

 private:
  void load();

  std::filesystem::path path_;
  std::ofstream out_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, CacheEntry> index_;
  std::size_t skipped_lines_ = 0;
};

}  // namespace emoharness
