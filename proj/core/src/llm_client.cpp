#include "emoharness/llm_client.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "emoharness/dataset.hpp"

namespace emoharness {

namespace {

std::string history_text(const std::vector<AttemptRecord>& attempts) {
  std::string out;
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    out += "\n  attempt " + std::to_string(i + 1) + ": " + attempts[i].detail;
  }
  return out;
}

// Replaces invalid UTF-8 so the text survives a JSONL round trip unchanged.
std::string sanitize_utf8(std::string text) {
  if (is_valid_utf8(text)) return text;
  const auto dumped = nlohmann::json(text).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  return nlohmann::json::parse(dumped).get<std::string>();
}

void default_sleep(std::chrono::duration<double> d) { std::this_thread::sleep_for(d); }

}  // namespace

CompletionError::CompletionError(std::string message, std::vector<AttemptRecord> attempts)
    : RuntimeFailure(message + history_text(attempts)), attempts_(std::move(attempts)) {}

int CompletionError::last_status() const noexcept { return attempts_.empty() ? 0 : attempts_.back().http_status; }

CompletionResult complete(const RenderedPrompt& prompt, const ProviderConfig& config, CompletionProvider& provider,
                          ResponseCache& cache, const DispatchOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  };

  const std::string key =
      cache_key(config.effective_model(), prompt.content_hash, config.temperature, config.max_output_tokens);
  if (auto hit = cache.lookup(key)) {
    CompletionResult r;
    r.raw_text = std::move(hit->raw_text);
    r.provider_meta = std::move(hit->meta);
    r.from_cache = true;
    r.attempt_count = 0;
    r.latency_ms = elapsed_ms();
    return r;
  }

  provider.preflight();

  const SleepFn& sleep = options.sleep ? options.sleep : SleepFn(default_sleep);
  std::vector<AttemptRecord> history;
  const int max_attempts = 1 + config.max_retries;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) {
      sleep(std::chrono::duration<double>(config.base_backoff_s * std::ldexp(1.0, attempt - 2)));
    }
    AttemptOutcome outcome;
    try {
      outcome = provider.attempt(prompt);
    } catch (const std::exception& e) {
      outcome = AttemptOutcome::fatal(0, std::string("provider threw: ") + e.what());
    }
    switch (outcome.kind) {
      case AttemptOutcome::Kind::ok: {
        CompletionResult r;
        r.raw_text = sanitize_utf8(std::move(outcome.raw_text));
        r.provider_meta = std::move(outcome.meta);
        r.attempt_count = attempt;
        cache.insert(CacheEntry{key, r.raw_text, r.provider_meta, {}});
        r.latency_ms = elapsed_ms();
        return r;
      }
      case AttemptOutcome::Kind::fatal:
        history.push_back({outcome.http_status, outcome.detail});
        throw CompletionError("request failed with a non-retryable error", std::move(history));
      case AttemptOutcome::Kind::transient:
        history.push_back({outcome.http_status, outcome.detail});
        break;
    }
  }
  throw CompletionError("retries exhausted after " + std::to_string(max_attempts) + " attempts", std::move(history));
}

std::vector<BatchSlot> run_batch(const std::vector<RenderedPrompt>& prompts, const ProviderConfig& config,
                                 CompletionProvider& provider, ResponseCache& cache, std::size_t concurrency_limit,
                                 const DispatchOptions& options, const SlotCallback& on_slot) {
  if (concurrency_limit == 0) throw ValidationError("concurrency limit must be at least 1");

  std::vector<BatchSlot> slots(prompts.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;

  // A fixed pool of `workers` threads, each running one prompt at a time,
  // bounds the number of in-flight requests.
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= prompts.size()) return;
      try {
        slots[i] = complete(prompts[i], config, provider, cache, options);
      } catch (const CompletionError& e) {
        slots[i] = e;
      } catch (const std::exception& e) {
        slots[i] = CompletionError(e.what(), {});
      }
      if (on_slot) {
        std::lock_guard lock(callback_mutex);
        on_slot(i, slots[i]);
      }
    }
  };

  const std::size_t workers = std::min(concurrency_limit, prompts.size());
  if (workers <= 1) {
    worker();
    return slots;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return slots;
}

}  // namespace emoharness
