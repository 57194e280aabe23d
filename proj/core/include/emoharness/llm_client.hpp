#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "emoharness/errors.hpp"
#include "emoharness/prompting.hpp"
#include "emoharness/providers.hpp"
#include "emoharness/response_cache.hpp"

namespace emoharness {

struct CompletionResult {
  std::string raw_text;
  double latency_ms = 0.0;
  int attempt_count = 0;  // 0 iff served from cache
  bool from_cache = false;
  std::map<std::string, std::string> provider_meta;
};

struct AttemptRecord {
  int http_status = 0;
  std::string detail;
};

/// A prompt that could not be completed. Carries every attempt made.
class CompletionError : public RuntimeFailure {
 public:
  CompletionError(std::string message, std::vector<AttemptRecord> attempts);
  const std::vector<AttemptRecord>& attempts() const noexcept { return attempts_; }
  /// Status of the last attempt, 0 if none was made or it had no HTTP status.
  int last_status() const noexcept;

 private:
  std::vector<AttemptRecord> attempts_;
};

using SleepFn = std::function<void(std::chrono::duration<double>)>;

struct DispatchOptions {
  /// Waits between attempts; defaults to std::this_thread::sleep_for.
  SleepFn sleep;
};

/// Cache-first completion. On a miss the provider is tried up to
/// 1 + max_retries times; before retry k (k = 1, 2, ...) the dispatcher waits
/// base_backoff * 2^(k-1). Transient outcomes (429, 5xx, transport errors)
/// are retried; fatal ones abort at once. The successful text is written to
/// the cache before returning. Throws CompletionError.
CompletionResult complete(const RenderedPrompt& prompt, const ProviderConfig& config, CompletionProvider& provider,
                          ResponseCache& cache, const DispatchOptions& options = {});

/// Per-slot outcome of a batch: a result or the error that slot hit.
using BatchSlot = std::variant<CompletionResult, CompletionError>;

/// Invoked from worker threads as each slot finishes, in completion order.
using SlotCallback = std::function<void(std::size_t index, const BatchSlot& slot)>;

/// Runs `complete` over all prompts with at most `concurrency_limit` calls in
/// flight. Returns slots in input order; a failed slot never aborts the rest.
/// Throws ValidationError when concurrency_limit is 0.
std::vector<BatchSlot> run_batch(const std::vector<RenderedPrompt>& prompts, const ProviderConfig& config,
                                 CompletionProvider& provider, ResponseCache& cache, std::size_t concurrency_limit,
                                 const DispatchOptions& options = {}, const SlotCallback& on_slot = {});

}  // namespace emoharness
