#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emoharness/prompting.hpp"

namespace emoharness {

enum class ProviderKind { http_chat, mock_lexicon };

std::string_view to_string(ProviderKind kind);
ProviderKind parse_provider_kind(std::string_view name);

struct ProviderConfig {
  ProviderKind kind = ProviderKind::mock_lexicon;
  std::string endpoint;
  std::string model_name;
  std::string auth_env_var;
  double temperature = 0.0;
  int max_output_tokens = 256;
  double request_timeout_s = 60.0;
  int max_retries = 4;
  double base_backoff_s = 1.0;

  /// Throws ValidationError when an invariant is broken.
  void validate() const;
  /// Model identifier used in cache keys; the mock reports "mock-lexicon".
  std::string effective_model() const;
  /// Cache file namespace, one per (provider, model) pair.
  std::string cache_namespace() const;
};

/// Result of a single provider attempt.
struct AttemptOutcome {
  enum class Kind { ok, transient, fatal };

  Kind kind = Kind::ok;
  int http_status = 0;
  std::string raw_text;
  std::string detail;  // error description or body excerpt
  std::map<std::string, std::string> meta;

  static AttemptOutcome success(std::string raw_text, std::map<std::string, std::string> meta = {});
  static AttemptOutcome transient(int status, std::string detail);
  static AttemptOutcome fatal(int status, std::string detail);
};

/// One network (or simulated) call per `attempt`. Retries and caching live in
/// `complete`, not here. Implementations must be callable from several threads.
class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  /// Called once per cache miss before any attempt; throws to abort without
  /// touching the network.
  virtual void preflight() const {}
  virtual AttemptOutcome attempt(const RenderedPrompt& prompt) = 0;
};

/// Trigger words per emotion. Matching is on lowercase ASCII-letter words.
struct LexiconEntry {
  std::string_view emotion;  // display name
  std::vector<std::string_view> triggers;
};

const std::vector<LexiconEntry>& mock_lexicon();

/// "Emotions: Anger, Fear" / "Emotions: None" for the given sentence.
std::string mock_lexicon_response(std::string_view sentence);

/// Offline provider answering from the trigger lexicon for the prompt's target
/// sentence. Counts invocations.
class MockLexiconProvider final : public CompletionProvider {
 public:
  AttemptOutcome attempt(const RenderedPrompt& prompt) override;
  std::size_t invocations() const noexcept { return invocations_.load(); }

 private:
  std::atomic<std::size_t> invocations_{0};
};

/// POSTs a chat-completion request:
///   {"model": ..., "messages": [{"role": "user", "content": <prompt>}],
///    "temperature": ..., "max_tokens": ...}
/// with `Authorization: Bearer $<auth_env_var>` when an auth variable is named.
/// The first text candidate of the response is taken as the output
/// (`choices[0].message.content`, `choices[0].text`, or
/// `candidates[0].content.parts[0].text`).
class HttpChatProvider final : public CompletionProvider {
 public:
  /// Throws ValidationError if the endpoint is not an http(s) URL.
  explicit HttpChatProvider(ProviderConfig config);
  /// Throws ValidationError if the named auth variable is unset.
  void preflight() const override;
  AttemptOutcome attempt(const RenderedPrompt& prompt) override;

  static std::string request_body(const ProviderConfig& config, std::string_view prompt_text);
  /// Throws RuntimeFailure when no text candidate is present.
  static std::string extract_text(std::string_view response_body);

 private:
  ProviderConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::optional<std::string> bearer_;
};

std::unique_ptr<CompletionProvider> make_provider(const ProviderConfig& config);

}  // namespace emoharness
