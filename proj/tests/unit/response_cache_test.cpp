#include <doctest.h>

#include <fstream>
#include <thread>
#include <vector>

#include "emoharness/response_cache.hpp"
#include "fixtures.hpp"

using namespace emoharness;
using emoharness::testing::TempDir;

TEST_CASE("cache key depends on every component") {
  const auto base = cache_key("gpt-4o", "abc", 0.0, 256);
  CHECK(base.size() == 64);
  CHECK(cache_key("gpt-4o", "abc", 0.0, 256) == base);
  CHECK(cache_key("gpt-4o-mini", "abc", 0.0, 256) != base);
  CHECK(cache_key("gpt-4o", "abd", 0.0, 256) != base);
  CHECK(cache_key("gpt-4o", "abc", 0.7, 256) != base);
  CHECK(cache_key("gpt-4o", "abc", 0.0, 512) != base);
  // Field boundaries cannot be shifted between components.
  CHECK(cache_key("ab", "c", 0.0, 1) != cache_key("a", "bc", 0.0, 1));
}

TEST_CASE("entries persist across instances") {
  TempDir dir;
  {
    ResponseCache cache(dir.path(), "http_chat__gpt-4o");
    CHECK(cache.size() == 0);
    cache.insert({"k1", "Emotions: Joy", {{"http_status", "200"}}, ""});
    cache.insert({"k2", "line one\nline \"two\"\né", {}, ""});
    cache.insert({"k1", "ignored duplicate", {}, ""});
    CHECK(cache.size() == 2);
  }
  ResponseCache reopened(dir.path(), "http_chat__gpt-4o");
  CHECK(reopened.size() == 2);
  CHECK(reopened.skipped_lines() == 0);
  const auto e1 = reopened.lookup("k1");
  REQUIRE(e1);
  CHECK(e1->raw_text == "Emotions: Joy");
  CHECK(e1->meta.at("http_status") == "200");
  CHECK_FALSE(e1->created_at.empty());
  CHECK(reopened.lookup("k2")->raw_text == "line one\nline \"two\"\né");
  CHECK_FALSE(reopened.lookup("k3"));
}

TEST_CASE("namespaces are separate files") {
  TempDir dir;
  ResponseCache a(dir.path(), "http_chat__model/a");
  ResponseCache b(dir.path(), "mock_lexicon__mock-lexicon");
  a.insert({"k", "A", {}, ""});
  CHECK_FALSE(b.lookup("k"));
  CHECK(a.path().filename() == "http_chat__model_a.jsonl");
  CHECK(ResponseCache::sanitize_namespace("") == "_");
  CHECK(ResponseCache::sanitize_namespace("../x") == "_.._x");
}

TEST_CASE("a torn or corrupt line is skipped on load") {
  TempDir dir;
  std::filesystem::path file;
  {
    ResponseCache cache(dir.path(), "ns");
    cache.insert({"good", "kept", {}, ""});
    file = cache.path();
  }
  {
    std::ofstream out(file, std::ios::app | std::ios::binary);
    out << "{not json}\n";
    out << R"({"key":"torn","raw_text":"half)";
  }
  ResponseCache cache(dir.path(), "ns");
  CHECK(cache.skipped_lines() == 2);
  CHECK(cache.size() == 1);
  CHECK(cache.lookup("good")->raw_text == "kept");
  CHECK_FALSE(cache.lookup("torn"));
}

TEST_CASE("in-memory cache works without a directory") {
  ResponseCache cache;
  cache.insert({"k", "v", {}, ""});
  CHECK(cache.lookup("k")->raw_text == "v");
  CHECK(cache.path().empty());
}

TEST_CASE("concurrent inserts and lookups") {
  TempDir dir;
  {
    ResponseCache cache(dir.path(), "ns");
    std::vector<std::jthread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&cache, t] {
        for (int i = 0; i < 200; ++i) {
          const std::string key = std::to_string(t) + "-" + std::to_string(i);
          cache.insert({key, "value " + key, {}, ""});
          CHECK(cache.lookup(key)->raw_text == "value " + key);
        }
      });
    }
  }
  ResponseCache reopened(dir.path(), "ns");
  CHECK(reopened.size() == 1600);
  CHECK(reopened.skipped_lines() == 0);
}
