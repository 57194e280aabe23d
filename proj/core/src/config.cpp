#include "emoharness/config.hpp"

#include <nlohmann/json.hpp>
#include <set>

#include "emoharness/artifact.hpp"
#include "emoharness/errors.hpp"

namespace emoharness {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& obj, std::string_view section, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("unknown config key '" + key + "' in " + std::string(section));
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, std::string_view section) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config key '" + std::string(key) + "' in " + std::string(section) + " has the wrong type");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (run_id.empty()) throw ValidationError("config: run_id is required");
  if (run_id.find_first_of("/\\") != std::string::npos || run_id == "." || run_id == ".." ||
      run_id.front() == '.') {
    throw ValidationError("config: run_id must be a plain directory name: " + run_id);
  }
  if (eval_path.empty()) throw ValidationError("config: data.eval is required");
  if (is_few_shot(strategy)) {
    if (!selection) throw ValidationError("config: " + std::string(to_string(strategy)) + " requires prompt.selection");
    if (train_path.empty()) throw ValidationError("config: few-shot strategies require data.train");
  } else if (selection) {
    throw ValidationError("config: " + std::string(to_string(strategy)) + " must not have prompt.selection");
  }
  if (concurrency_limit == 0) throw ValidationError("config: concurrency_limit must be at least 1");
  if (output_dir.empty()) throw ValidationError("config: output_dir is required");
  if (cache_dir.empty()) throw ValidationError("config: cache_dir is required");
  provider.validate();
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("config root must be an object");
  reject_unknown_keys(root, "config",
                      {"run_id", "seed", "data", "prompt", "provider", "parse_policy", "concurrency_limit",
                       "cache_dir", "output_dir"});

  ExperimentConfig cfg;
  cfg.run_id = get_or<std::string>(root, "run_id", "", "config");
  cfg.seed = get_or<std::uint64_t>(root, "seed", 0, "config");

  const json data = root.value("data", json::object());
  reject_unknown_keys(data, "data", {"train", "eval", "schema"});
  if (data.contains("train")) cfg.train_path = resolve(base_dir, get_or<std::string>(data, "train", "", "data"));
  if (data.contains("eval")) cfg.eval_path = resolve(base_dir, get_or<std::string>(data, "eval", "", "data"));
  if (data.contains("schema") && !data["schema"].is_null()) {
    cfg.schema = LabelSchema(get_or<std::vector<std::string>>(data, "schema", {}, "data"));
  }

  const json prompt = root.value("prompt", json::object());
  reject_unknown_keys(prompt, "prompt", {"strategy", "selection", "templates_dir"});
  cfg.strategy = parse_strategy(get_or<std::string>(prompt, "strategy", "zero_shot", "prompt"));
  if (prompt.contains("selection") && !prompt["selection"].is_null()) {
    cfg.selection = ExampleSelection::parse(get_or<std::string>(prompt, "selection", "", "prompt"), cfg.seed);
  }
  if (prompt.contains("templates_dir") && !prompt["templates_dir"].is_null()) {
    cfg.templates_dir = resolve(base_dir, get_or<std::string>(prompt, "templates_dir", "", "prompt"));
  }

  const json provider = root.value("provider", json::object());
  reject_unknown_keys(provider, "provider",
                      {"kind", "endpoint", "model_name", "auth_env_var", "temperature", "max_output_tokens",
                       "request_timeout", "max_retries", "base_backoff"});
  auto& p = cfg.provider;
  p.kind = parse_provider_kind(get_or<std::string>(provider, "kind", "mock_lexicon", "provider"));
  p.endpoint = get_or<std::string>(provider, "endpoint", "", "provider");
  p.model_name = get_or<std::string>(provider, "model_name", "", "provider");
  p.auth_env_var = get_or<std::string>(provider, "auth_env_var", "", "provider");
  p.temperature = get_or<double>(provider, "temperature", p.temperature, "provider");
  p.max_output_tokens = get_or<int>(provider, "max_output_tokens", p.max_output_tokens, "provider");
  p.request_timeout_s = get_or<double>(provider, "request_timeout", p.request_timeout_s, "provider");
  p.max_retries = get_or<int>(provider, "max_retries", p.max_retries, "provider");
  p.base_backoff_s = get_or<double>(provider, "base_backoff", p.base_backoff_s, "provider");

  cfg.parse_policy = parse_policy_from(get_or<std::string>(root, "parse_policy", "lenient", "config"));
  const auto limit = get_or<std::int64_t>(root, "concurrency_limit", 4, "config");
  if (limit < 1) throw ValidationError("config: concurrency_limit must be at least 1");
  cfg.concurrency_limit = static_cast<std::size_t>(limit);
  cfg.cache_dir = resolve(base_dir, get_or<std::string>(root, "cache_dir", "cache", "config"));
  cfg.output_dir = resolve(base_dir, get_or<std::string>(root, "output_dir", "runs", "config"));

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ValidationError("config file not found: " + path.string());
  const auto base = std::filesystem::absolute(path).parent_path();
  return parse_config(read_file(path), base);
}

std::string config_snapshot(const ExperimentConfig& c) {
  auto abs = [](const std::filesystem::path& p) {
    return p.empty() ? std::string{} : std::filesystem::absolute(p).lexically_normal().string();
  };
  json j;
  j["run_id"] = c.run_id;
  j["seed"] = c.seed;
  j["data"]["train"] = abs(c.train_path);
  j["data"]["eval"] = abs(c.eval_path);
  j["data"]["schema"] = c.schema ? json(c.schema->labels()) : json(nullptr);
  j["prompt"]["strategy"] = to_string(c.strategy);
  j["prompt"]["selection"] = c.selection ? json(c.selection->to_spec()) : json(nullptr);
  j["prompt"]["templates_dir"] = c.templates_dir ? json(abs(*c.templates_dir)) : json(nullptr);
  const auto& p = c.provider;
  j["provider"]["kind"] = to_string(p.kind);
  j["provider"]["endpoint"] = p.endpoint;
  j["provider"]["model_name"] = p.model_name;
  j["provider"]["auth_env_var"] = p.auth_env_var;
  j["provider"]["temperature"] = p.temperature;
  j["provider"]["max_output_tokens"] = p.max_output_tokens;
  j["provider"]["request_timeout"] = p.request_timeout_s;
  j["provider"]["max_retries"] = p.max_retries;
  j["provider"]["base_backoff"] = p.base_backoff_s;
  j["parse_policy"] = to_string(c.parse_policy);
  j["concurrency_limit"] = c.concurrency_limit;
  j["cache_dir"] = abs(c.cache_dir);
  j["output_dir"] = abs(c.output_dir);
  return j.dump(2) + "\n";
}

}  // namespace emoharness
