#include "emoharness/providers.hpp"

#include <cctype>
#include <cstdlib>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "emoharness/errors.hpp"

namespace emoharness {

using json = nlohmann::json;

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::http_chat: return "http_chat";
    case ProviderKind::mock_lexicon: return "mock_lexicon";
  }
  return "mock_lexicon";
}

ProviderKind parse_provider_kind(std::string_view name) {
  if (name == "http_chat") return ProviderKind::http_chat;
  if (name == "mock_lexicon") return ProviderKind::mock_lexicon;
  throw ValidationError("unknown provider kind: " + std::string(name));
}

void ProviderConfig::validate() const {
  if (kind == ProviderKind::http_chat) {
    if (endpoint.empty()) throw ValidationError("http_chat provider requires an endpoint");
    if (model_name.empty()) throw ValidationError("http_chat provider requires a model_name");
    if (!endpoint.starts_with("http://") && !endpoint.starts_with("https://")) {
      throw ValidationError("endpoint must be an http:// or https:// URL: " + endpoint);
    }
  }
  if (!(temperature >= 0.0)) throw ValidationError("temperature must be >= 0");
  if (max_output_tokens <= 0) throw ValidationError("max_output_tokens must be positive");
  if (!(request_timeout_s > 0.0)) throw ValidationError("request_timeout must be positive");
  if (max_retries < 0) throw ValidationError("max_retries must be >= 0");
  if (!(base_backoff_s >= 0.0)) throw ValidationError("base_backoff must be >= 0");
}

std::string ProviderConfig::effective_model() const {
  if (kind == ProviderKind::mock_lexicon && model_name.empty()) return "mock-lexicon";
  return model_name;
}

std::string ProviderConfig::cache_namespace() const {
  return std::string(to_string(kind)) + "__" + effective_model();
}

AttemptOutcome AttemptOutcome::success(std::string raw_text, std::map<std::string, std::string> meta) {
  AttemptOutcome o;
  o.kind = Kind::ok;
  o.http_status = 200;
  o.raw_text = std::move(raw_text);
  o.meta = std::move(meta);
  return o;
}

AttemptOutcome AttemptOutcome::transient(int status, std::string detail) {
  AttemptOutcome o;
  o.kind = Kind::transient;
  o.http_status = status;
  o.detail = std::move(detail);
  return o;
}

AttemptOutcome AttemptOutcome::fatal(int status, std::string detail) {
  AttemptOutcome o;
  o.kind = Kind::fatal;
  o.http_status = status;
  o.detail = std::move(detail);
  return o;
}

// Mock lexicon

const std::vector<LexiconEntry>& mock_lexicon() {
  static const std::vector<LexiconEntry> table = {
      {"Anger", {"furious", "angry", "enraged", "livid"}},
      {"Disgust", {"disgusted", "revolted", "repulsed"}},
      {"Fear", {"terrified", "afraid", "scared", "frightened"}},
      {"Joy", {"delighted", "happy", "thrilled", "overjoyed"}},
      {"Sadness", {"grieving", "sad", "heartbroken", "miserable"}},
      {"Surprise", {"astonished", "shocked", "amazed", "stunned"}},
  };
  return table;
}

std::string mock_lexicon_response(std::string_view sentence) {
  std::vector<std::string> words;
  std::string word;
  for (char c : sentence) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc)) {
      word += static_cast<char>(std::tolower(uc));
    } else if (!word.empty()) {
      words.push_back(std::move(word));
      word.clear();
    }
  }
  if (!word.empty()) words.push_back(std::move(word));

  std::string labels;
  for (const auto& entry : mock_lexicon()) {
    bool hit = false;
    for (auto trigger : entry.triggers) {
      for (const auto& w : words) hit = hit || w == trigger;
    }
    if (!hit) continue;
    if (!labels.empty()) labels += ", ";
    labels += entry.emotion;
  }
  return "Emotions: " + (labels.empty() ? std::string("None") : labels);
}

AttemptOutcome MockLexiconProvider::attempt(const RenderedPrompt& prompt) {
  ++invocations_;
  auto sentence = extract_target_sentence(prompt.text);
  if (!sentence) return AttemptOutcome::fatal(0, "mock provider: prompt has no Sentence: slot");
  return AttemptOutcome::success(mock_lexicon_response(*sentence), {{"provider", "mock_lexicon"}});
}

// HTTP chat provider

namespace {

bool is_transient_status(int status) { return status == 429 || (status >= 500 && status <= 599); }

std::string excerpt(std::string_view body, std::size_t limit = 300) {
  if (body.size() <= limit) return std::string(body);
  return std::string(body.substr(0, limit)) + "...";
}

}  // namespace

HttpChatProvider::HttpChatProvider(ProviderConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.kind != ProviderKind::http_chat) throw ValidationError("HttpChatProvider needs an http_chat config");
  const auto scheme_end = config_.endpoint.find("://");
  const auto path_start = config_.endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = config_.endpoint;
    path_ = "/";
  } else {
    scheme_host_port_ = config_.endpoint.substr(0, path_start);
    path_ = config_.endpoint.substr(path_start);
  }
  if (!config_.auth_env_var.empty()) {
    if (const char* value = std::getenv(config_.auth_env_var.c_str()); value != nullptr && *value != '\0') {
      bearer_ = value;
    }
  }
}

void HttpChatProvider::preflight() const {
  if (!config_.auth_env_var.empty() && !bearer_) {
    throw ValidationError("environment variable " + config_.auth_env_var + " (provider API key) is not set");
  }
}

std::string HttpChatProvider::request_body(const ProviderConfig& config, std::string_view prompt_text) {
  nlohmann::ordered_json body;
  body["model"] = config.model_name;
  body["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", std::string(prompt_text)}}});
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_output_tokens;
  return body.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

std::string HttpChatProvider::extract_text(std::string_view response_body) {
  json j;
  try {
    j = json::parse(response_body);
  } catch (const json::exception& e) {
    throw RuntimeFailure(std::string("response is not JSON: ") + e.what());
  }
  auto string_at = [](const json& node, std::initializer_list<const char*> keys) -> std::optional<std::string> {
    const json* cur = &node;
    for (const char* key : keys) {
      if (cur->is_array()) {
        if (cur->empty()) return std::nullopt;
        cur = &cur->front();
      }
      if (!cur->is_object() || !cur->contains(key)) return std::nullopt;
      cur = &(*cur)[key];
    }
    if (cur->is_array() && !cur->empty()) cur = &cur->front();
    if (!cur->is_string()) return std::nullopt;
    return cur->get<std::string>();
  };
  if (auto s = string_at(j, {"choices", "message", "content"})) return *s;
  if (auto s = string_at(j, {"choices", "text"})) return *s;
  if (auto s = string_at(j, {"candidates", "content", "parts", "text"})) return *s;
  throw RuntimeFailure("response carries no text candidate: " + excerpt(response_body));
}

AttemptOutcome HttpChatProvider::attempt(const RenderedPrompt& prompt) {
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration<double>(config_.request_timeout_s);
  const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_us).count(),
                                static_cast<time_t>(timeout_us.count() % 1'000'000));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_us).count(),
                          static_cast<time_t>(timeout_us.count() % 1'000'000));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_us).count(),
                           static_cast<time_t>(timeout_us.count() % 1'000'000));

  httplib::Headers headers;
  if (bearer_) headers.emplace("Authorization", "Bearer " + *bearer_);

  const std::string body = request_body(config_, prompt.text);
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    return AttemptOutcome::transient(0, "transport error: " + httplib::to_string(res.error()));
  }
  const int status = res->status;
  if (status >= 200 && status < 300) {
    try {
      std::map<std::string, std::string> meta{{"http_status", std::to_string(status)}};
      try {
        const auto j = json::parse(res->body);
        if (j.contains("model") && j["model"].is_string()) meta["model"] = j["model"].get<std::string>();
        if (j.contains("id") && j["id"].is_string()) meta["response_id"] = j["id"].get<std::string>();
      } catch (const json::exception&) {
      }
      return AttemptOutcome::success(extract_text(res->body), std::move(meta));
    } catch (const RuntimeFailure& e) {
      return AttemptOutcome::fatal(status, e.what());
    }
  }
  std::string detail = "HTTP " + std::to_string(status) + ": " + excerpt(res->body);
  if (is_transient_status(status)) return AttemptOutcome::transient(status, std::move(detail));
  return AttemptOutcome::fatal(status, std::move(detail));
}

std::unique_ptr<CompletionProvider> make_provider(const ProviderConfig& config) {
  config.validate();
  switch (config.kind) {
    case ProviderKind::mock_lexicon: return std::make_unique<MockLexiconProvider>();
    case ProviderKind::http_chat: return std::make_unique<HttpChatProvider>(config);
  }
  throw ValidationError("unsupported provider kind");
}

}  // namespace emoharness
