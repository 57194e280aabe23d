#include "emoharness/response_cache.hpp"

#include <charconv>
#include <nlohmann/json.hpp>

#include "emoharness/artifact.hpp"
#include "emoharness/digest.hpp"
#include "emoharness/errors.hpp"

namespace emoharness {

using json = nlohmann::ordered_json;

std::string cache_key(std::string_view model_name, std::string_view prompt_hash, double temperature,
                      int max_output_tokens) {
  char temp[32];
  auto [end, ec] = std::to_chars(temp, temp + sizeof temp, temperature);
  (void)ec;
  std::string material;
  material.reserve(model_name.size() + prompt_hash.size() + 48);
  // Unit separators keep field boundaries unambiguous.
  material.append(model_name).append(1, '\x1f');
  material.append(prompt_hash).append(1, '\x1f');
  material.append(temp, end).append(1, '\x1f');
  material.append(std::to_string(max_output_tokens));
  return sha256_hex(material);
}

std::string ResponseCache::sanitize_namespace(std::string_view name_space) {
  std::string out;
  for (char c : name_space) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '_' || c == '.';
    out += safe ? c : '_';
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

ResponseCache::ResponseCache() = default;

ResponseCache::ResponseCache(const std::filesystem::path& dir, std::string_view name_space) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create cache directory " + dir.string() + ": " + ec.message());
  path_ = dir / (sanitize_namespace(name_space) + ".jsonl");
  load();
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw RuntimeFailure("cannot open cache file " + path_.string());
}

void ResponseCache::load() {
  if (!std::filesystem::exists(path_)) return;
  const std::string contents = read_file(path_);
  std::size_t pos = 0;
  while (pos < contents.size()) {
    auto nl = contents.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    if (!terminated) nl = contents.size();
    const std::string_view line(contents.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    if (!terminated) {
      // Torn final write.
      ++skipped_lines_;
      continue;
    }
    try {
      const auto j = json::parse(line);
      CacheEntry entry;
      entry.key = j.at("key").get<std::string>();
      entry.raw_text = j.at("raw_text").get<std::string>();
      if (j.contains("meta")) {
        for (const auto& [k, v] : j.at("meta").items()) {
          entry.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
      }
      entry.created_at = j.value("created_at", "");
      index_.try_emplace(entry.key, std::move(entry));
    } catch (const json::exception&) {
      ++skipped_lines_;
    }
  }
  if (!contents.empty() && contents.back() != '\n') {
    // Terminate the torn line so the next append starts on a fresh line.
    std::ofstream fix(path_, std::ios::binary | std::ios::app);
    fix << '\n';
  }
}

std::optional<CacheEntry> ResponseCache::lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::insert(CacheEntry entry) {
  std::unique_lock lock(mutex_);
  if (index_.contains(entry.key)) return;
  if (entry.created_at.empty()) entry.created_at = utc_timestamp();
  if (out_.is_open()) {
    json j;
    j["key"] = entry.key;
    j["raw_text"] = entry.raw_text;
    j["meta"] = json::object();
    for (const auto& [k, v] : entry.meta) j["meta"][k] = v;
    j["created_at"] = entry.created_at;
    out_ << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    out_.flush();
    if (!out_) throw RuntimeFailure("failed to append to cache file " + path_.string());
  }
  index_.emplace(entry.key, std::move(entry));
}

std::size_t ResponseCache::size() const {
  std::shared_lock lock(mutex_);
  return index_.size();
}

}  // namespace emoharness
