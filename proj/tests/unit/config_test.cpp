#include <doctest.h>

#include "emoharness/config.hpp"
#include "emoharness/errors.hpp"
#include "fixtures.hpp"

using namespace emoharness;

namespace {

const char* kFewShot = R"({
  "run_id": "fs-6",
  "seed": 7,
  "data": {"train": "data/train.csv", "eval": "data/dev.csv"},
  "prompt": {"strategy": "few_shot_cot", "selection": "per_emotion_coverage:6"},
  "provider": {"kind": "http_chat", "endpoint": "https://api.example.com/v1/chat/completions",
               "model_name": "gpt-4o", "auth_env_var": "OPENAI_API_KEY", "temperature": 0,
               "max_output_tokens": 64, "request_timeout": 30, "max_retries": 2, "base_backoff": 0.5},
  "parse_policy": "strict",
  "concurrency_limit": 8
})";

}  // namespace

TEST_CASE("full config parses and resolves paths") {
  const auto cfg = parse_config(kFewShot, "/base");
  CHECK(cfg.run_id == "fs-6");
  CHECK(cfg.seed == 7);
  CHECK(cfg.train_path == "/base/data/train.csv");
  CHECK(cfg.eval_path == "/base/data/dev.csv");
  CHECK_FALSE(cfg.schema);
  CHECK(cfg.strategy == PromptStrategy::few_shot_cot);
  REQUIRE(cfg.selection);
  CHECK(cfg.selection->method() == SelectionMethod::per_emotion_coverage);
  CHECK(cfg.selection->count() == 6);
  CHECK(cfg.selection->seed() == 7);
  CHECK(cfg.provider.kind == ProviderKind::http_chat);
  CHECK(cfg.provider.model_name == "gpt-4o");
  CHECK(cfg.provider.max_output_tokens == 64);
  CHECK(cfg.provider.request_timeout_s == 30);
  CHECK(cfg.provider.max_retries == 2);
  CHECK(cfg.provider.base_backoff_s == 0.5);
  CHECK(cfg.parse_policy == ParsePolicy::strict);
  CHECK(cfg.concurrency_limit == 8);
  CHECK(cfg.cache_dir == "/base/cache");
  CHECK(cfg.output_dir == "/base/runs");
}

TEST_CASE("defaults for a minimal mock config") {
  const auto cfg = parse_config(R"({"run_id": "z", "data": {"eval": "/abs/dev.csv"}})");
  CHECK(cfg.strategy == PromptStrategy::zero_shot);
  CHECK(cfg.provider.kind == ProviderKind::mock_lexicon);
  CHECK(cfg.provider.temperature == 0.0);
  CHECK(cfg.parse_policy == ParsePolicy::lenient);
  CHECK(cfg.concurrency_limit == 4);
  CHECK(cfg.eval_path == "/abs/dev.csv");
}

TEST_CASE("explicit schema") {
  const auto cfg =
      parse_config(R"({"run_id": "z", "data": {"eval": "d.csv", "schema": ["anger", "disgust", "fear"]}})");
  REQUIRE(cfg.schema);
  CHECK(cfg.schema->size() == 3);
}

TEST_CASE("invalid configs are rejected") {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"data": {"eval": "d.csv"}})",
      R"({"run_id": "../up", "data": {"eval": "d.csv"}})",
      R"({"run_id": ".hidden", "data": {"eval": "d.csv"}})",
      R"({"run_id": "x"})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "bogus": 1})",
      R"({"run_id": "x", "data": {"eval": "d.csv", "dev": "y"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "prompt": {"strategy": "few_shot"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "prompt": {"strategy": "few_shot", "selection": "first_k:3"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "prompt": {"selection": "first_k:3"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv", "train": "t.csv"}, "prompt": {"strategy": "few_shot", "selection": "first_k:0"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "prompt": {"strategy": "chain"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "concurrency_limit": 0})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "concurrency_limit": "four"})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "parse_policy": "loose"})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "provider": {"kind": "http_chat"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "provider": {"kind": "http_chat", "model_name": "m", "endpoint": "ftp://x"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "provider": {"temperature": -1}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "provider": {"max_output_tokens": 0}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "provider": {"kind": "other"}})",
      R"({"run_id": "x", "data": {"eval": "d.csv"}, "provider": {"api_key": "sk-123"}})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_config(text), ValidationError);
  }
}

TEST_CASE("snapshot is complete, reparsable and free of secrets") {
  ::setenv("EMOHARNESS_CONFIG_TEST_KEY", "sk-very-secret", 1);
  auto text = std::string(kFewShot);
  text.replace(text.find("OPENAI_API_KEY"), 14, "EMOHARNESS_CONFIG_TEST_KEY");
  const auto cfg = parse_config(text, "/base");
  const auto snap = config_snapshot(cfg);
  CHECK(snap.find("sk-very-secret") == std::string::npos);
  CHECK(snap.find("EMOHARNESS_CONFIG_TEST_KEY") != std::string::npos);
  CHECK(snap.find("\"request_timeout\"") != std::string::npos);
  CHECK(snap.find("\"selection\": \"per_emotion_coverage:6:7\"") != std::string::npos);
  CHECK(config_snapshot(parse_config(snap)) == snap);
  ::unsetenv("EMOHARNESS_CONFIG_TEST_KEY");
}

TEST_CASE("load_config resolves against the file location") {
  emoharness::testing::TempDir dir;
  emoharness::testing::spit(dir / "exp.json", R"({"run_id": "z", "data": {"eval": "dev.csv"}})");
  const auto cfg = load_config(dir / "exp.json");
  CHECK(cfg.eval_path == (dir.path() / "dev.csv").lexically_normal());
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ValidationError);
}
